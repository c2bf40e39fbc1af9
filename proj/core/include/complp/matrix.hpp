#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "complp/rational.hpp"

namespace complp {

/// Dense row-major matrix of exact rationals. Sized for desk-scale tableaux;
/// no sparsity, no factorization.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t r, std::size_t c) {
    check(r, c);
    return data_[r * cols_ + c];
  }
  const Rational& at(std::size_t r, std::size_t c) const {
    check(r, c);
    return data_[r * cols_ + c];
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  /// row_target += factor * row_source
  void add_row_multiple(std::size_t target, std::size_t source, const Rational& factor) {
    for (std::size_t c = 0; c < cols_; ++c)
      at(target, c) += factor * at(source, c);
  }

  void scale_row(std::size_t r, const Rational& factor) {
    for (std::size_t c = 0; c < cols_; ++c) at(r, c) *= factor;
  }

  std::vector<Rational> row(std::size_t r) const {
    std::vector<Rational> out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out[c] = at(r, c);
    return out;
  }

  std::vector<Rational> col(std::size_t c) const {
    std::vector<Rational> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
  }

  /// Reduced row echelon form, exact. Two matrices have equal row spaces
  /// iff their RREFs are identical.
  Matrix rref() const {
    Matrix m = *this;
    std::size_t pivot_row = 0;
    for (std::size_t pc = 0; pc < cols_ && pivot_row < rows_; ++pc) {
      std::size_t pr = pivot_row;
      while (pr < rows_ && m.at(pr, pc).is_zero()) ++pr;
      if (pr == rows_) continue;
      if (pr != pivot_row)
        for (std::size_t c = 0; c < cols_; ++c)
          std::swap(m.at(pr, c), m.at(pivot_row, c));
      m.scale_row(pivot_row, m.at(pivot_row, pc).inverse());
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r != pivot_row && !m.at(r, pc).is_zero())
          m.add_row_multiple(r, pivot_row, -m.at(r, pc));
      }
      ++pivot_row;
    }
    return m;
  }

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index");
  }

  std::size_t rows_, cols_;
  std::vector<Rational> data_;
};

inline std::vector<Rational> mat_vec(const Matrix& m, const std::vector<Rational>& v) {
  if (v.size() != m.cols()) throw std::invalid_argument("mat_vec dimension mismatch");
  std::vector<Rational> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Rational acc;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += m.at(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

inline Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot dimension mismatch");
  Rational acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace complp
