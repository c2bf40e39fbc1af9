#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "complp/lp_model.hpp"
#include "complp/matrix.hpp"
#include "complp/rational.hpp"

namespace complp {

class TableauError : public std::runtime_error {
 public:
  explicit TableauError(const std::string& what) : std::runtime_error(what) {}
};

/// Dimensions of the combined primal-dual system for an m x n canonical LP.
/// The tableau has m+n+1 rows (the last one is the duality-gap row) and
/// 2(m+n) structural columns plus the right-hand side.
struct EqDims {
  std::size_t m = 0;
  std::size_t n = 0;

  std::size_t upper() const { return m + n; }        // rows above the gap row
  std::size_t gap_row() const { return m + n; }      // 0-based index of the gap row
  std::size_t rows() const { return m + n + 1; }
  std::size_t num_cols() const { return 2 * (m + n); }
  std::size_t rhs_col() const { return 2 * (m + n); }

  bool operator==(const EqDims&) const = default;
};

/// Complement pairing: columns j and j + (m+n) form a pair whose variables
/// must have product zero in any solution. Involution on 0-based indices.
inline std::size_t complement(std::size_t col, const EqDims& dims) {
  if (col >= dims.num_cols()) throw TableauError("complement: column out of range");
  return col < dims.upper() ? col + dims.upper() : col - dims.upper();
}

/// A candidate solution of the system, ordered z = (y_1..y_m, x_1..x_n,
/// s_1..s_m, t_1..t_n).
struct EqSolution {
  std::vector<Rational> z;

  std::vector<Rational> extract_y(const EqDims& d) const {
    return {z.begin(), z.begin() + static_cast<std::ptrdiff_t>(d.m)};
  }
  std::vector<Rational> extract_x(const EqDims& d) const {
    return {z.begin() + static_cast<std::ptrdiff_t>(d.m),
            z.begin() + static_cast<std::ptrdiff_t>(d.m + d.n)};
  }

  bool operator==(const EqSolution&) const = default;
};

/// The augmented tableau [M q] of the combined system, with explicit basis
/// bookkeeping (row -> column of the current unit vector). The basis is
/// tracked rather than re-detected: after pivoting, several columns can
/// incidentally look like unit vectors.
class EqTableau {
 public:
  EqTableau(EqDims dims, Matrix entries,
            std::vector<std::optional<std::size_t>> basis);

  /// Builds the initial tableau for a canonical LP with a uniform theta:
  /// rows 0..m-1 encode Ax + s = b, rows m..m+n-1 encode -A^T y + t = -c,
  /// the gap row encodes b.y - c.x = 0, and theta times the gap row is
  /// added to every upper row.
  static EqTableau build(const CanonicalLp& lp, const Rational& theta);

  /// Same construction with an individual theta per upper row.
  static EqTableau build(const CanonicalLp& lp, const std::vector<Rational>& theta_rows);

  const EqDims& dims() const { return dims_; }
  const Matrix& entries() const { return entries_; }

  const Rational& entry(std::size_t r, std::size_t c) const { return entries_.at(r, c); }
  const Rational& q(std::size_t r) const { return entries_.at(r, dims_.rhs_col()); }
  const Rational& gap_entry(std::size_t c) const { return entries_.at(dims_.gap_row(), c); }
  const Rational& gap_q() const { return q(dims_.gap_row()); }

  const std::vector<std::optional<std::size_t>>& basis() const { return basis_; }
  std::optional<std::size_t> basic_col_of_row(std::size_t r) const { return basis_.at(r); }
  /// Row where `col` is basic, if any.
  std::optional<std::size_t> row_of_basic_col(std::size_t col) const;
  bool basis_complete() const;
  /// No pair {j, complement(j)} fully inside the basis.
  bool basis_complementary() const;

  /// Gauss-Jordan pivot: column `col` becomes the unit vector with 1 in
  /// `row`; the basis map is updated. Throws on a zero pivot entry.
  void pivot(std::size_t row, std::size_t col);

  /// Elementary row operations (used by the engine's gap-row devices).
  void add_row_multiple(std::size_t target, std::size_t source, const Rational& factor) {
    entries_.add_row_multiple(target, source, factor);
  }
  void scale_row(std::size_t row, const Rational& factor) {
    if (factor.is_zero()) throw TableauError("scaling a row by zero");
    entries_.scale_row(row, factor);
  }

  /// Reads the candidate solution off the basis: z_j = q_row for the basic
  /// column of each row, zero elsewhere. nullopt if any upper row lacks a
  /// basic column.
  std::optional<EqSolution> basic_solution() const;

  /// Populates the basis by scanning for unit columns (used when loading
  /// fixtures that carry no basis map). For each upper row the smallest
  /// column index that is a unit vector for that row is chosen.
  void detect_basis();

  bool operator==(const EqTableau&) const = default;

 private:
  EqDims dims_;
  Matrix entries_;
  std::vector<std::optional<std::size_t>> basis_;  // one slot per upper row
};

/// Exact verification report for a candidate solution against a tableau
/// (normally the theta=0 construction) and the originating LP.
struct EqCheckReport {
  bool equations_ok = false;
  std::vector<Rational> residuals;            // per tableau row
  bool nonnegative_ok = false;
  std::vector<std::size_t> negative_components;
  bool complementarity_ok = false;
  std::vector<std::size_t> violating_pairs;   // smaller index of each bad pair
  bool primal_feasible = false;
  bool dual_feasible = false;
  bool zero_gap = false;
  Rational primal_objective;
  Rational dual_objective;

  bool all_ok() const {
    return equations_ok && nonnegative_ok && complementarity_ok &&
           primal_feasible && dual_feasible && zero_gap;
  }
};

/// Checks, exactly: M z = q on `t0`, z >= 0, pairwise complementarity, and
/// that the extracted (x, y) form a primal-dual optimal pair for `lp`.
EqCheckReport verify_eq_solution(const CanonicalLp& lp, const EqTableau& t0,
                                 const EqSolution& z);

/// Convenience overload building the theta=0 tableau internally.
EqCheckReport verify_eq_solution(const CanonicalLp& lp, const EqSolution& z);

/// The reduced system [P r]: the two designated columns, then the m+n unit
/// columns; every remaining column is moved to the right-hand side weighted
/// by the given solution.
struct PrSystem {
  Matrix P;                                   // (m+n+1) x (m+n+2)
  std::vector<Rational> r;                    // m+n+1
  std::vector<std::size_t> column_origin;     // P column -> source tableau column
  std::vector<std::size_t> moved_columns;     // columns folded into r
};

/// Builds [P r] from a tableau and a solution of its equation system.
/// Preconditions: gap-row entries of both designated columns are positive
/// and z_a + z_b > 0; violations throw TableauError.
PrSystem reduce_to_pr(const EqTableau& t, const EqSolution& z,
                      std::size_t col_a, std::size_t col_b);

/// Result of the first-column elimination shift on a [P r] system.
struct ShiftResult {
  std::vector<Rational> shifted;              // (0, t2_bar, x_bar...)
  Rational f;                                 // gap-row ratio of the two lead columns
  std::vector<std::size_t> negative_components;  // indices into `shifted` that went negative
};

/// Given z = (t1, t2, x_1..x_{m+n}) with P z = r, z >= 0, produces
/// z_bar = (0, t1*f + t2, ...) with P z_bar = r exactly. Components that
/// come out negative are reported, never dropped.
ShiftResult shifted_solution(const PrSystem& pr, const std::vector<Rational>& z);

/// Convex-combination witness: given a solution z_star and rows with
/// negative q whose basic columns are unit vectors, returns a solution with
/// every listed component nonnegative and at least one exactly zero.
EqSolution convex_witness(const EqTableau& t, const EqSolution& z_star,
                           const std::vector<std::size_t>& neg_rows);

/// JSON (de)serialization; entries as "p/q" strings, 0-based indices.
std::string tableau_to_json(const EqTableau& t);
EqTableau tableau_from_json(const std::string& text);

}  // namespace complp
