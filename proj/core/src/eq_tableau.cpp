#include "complp/eq_tableau.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

namespace complp {

using ordered_json = nlohmann::ordered_json;

EqTableau::EqTableau(EqDims dims, Matrix entries,
                     std::vector<std::optional<std::size_t>> basis)
    : dims_(dims), entries_(std::move(entries)), basis_(std::move(basis)) {
  if (entries_.rows() != dims_.rows() || entries_.cols() != dims_.rhs_col() + 1)
    throw TableauError("tableau shape does not match dims");
  if (basis_.empty()) basis_.assign(dims_.upper(), std::nullopt);
  if (basis_.size() != dims_.upper())
    throw TableauError("basis map must have one slot per upper row");
}

EqTableau EqTableau::build(const CanonicalLp& lp, const Rational& theta) {
  return build(lp, std::vector<Rational>(lp.m() + lp.n(), theta));
}

EqTableau EqTableau::build(const CanonicalLp& lp, const std::vector<Rational>& theta_rows) {
  const EqDims dims{lp.m(), lp.n()};
  if (theta_rows.size() != dims.upper())
    throw TableauError("need one theta per upper row");

  Matrix t(dims.rows(), dims.rhs_col() + 1);
  const std::size_t m = lp.m(), n = lp.n(), N = dims.upper();

  // rows 0..m-1:  Ax + s = b
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.at(i, m + j) = lp.A.at(i, j);
    t.at(i, N + i) = Rational(1);
    t.at(i, dims.rhs_col()) = lp.b[i];
  }
  // rows m..m+n-1:  -A^T y + t = -c
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) t.at(m + j, i) = -lp.A.at(i, j);
    t.at(m + j, N + m + j) = Rational(1);
    t.at(m + j, dims.rhs_col()) = -lp.c[j];
  }
  // gap row:  b.y - c.x = 0
  for (std::size_t i = 0; i < m; ++i) t.at(dims.gap_row(), i) = lp.b[i];
  for (std::size_t j = 0; j < n; ++j) t.at(dims.gap_row(), m + j) = -lp.c[j];

  for (std::size_t i = 0; i < N; ++i)
    if (!theta_rows[i].is_zero()) t.add_row_multiple(i, dims.gap_row(), theta_rows[i]);

  std::vector<std::optional<std::size_t>> basis(N);
  for (std::size_t i = 0; i < N; ++i) basis[i] = N + i;  // the U block
  return EqTableau(dims, std::move(t), std::move(basis));
}

std::optional<std::size_t> EqTableau::row_of_basic_col(std::size_t col) const {
  for (std::size_t r = 0; r < basis_.size(); ++r)
    if (basis_[r] && *basis_[r] == col) return r;
  return std::nullopt;
}

bool EqTableau::basis_complete() const {
  return std::all_of(basis_.begin(), basis_.end(),
                     [](const auto& b) { return b.has_value(); });
}

bool EqTableau::basis_complementary() const {
  for (std::size_t r = 0; r < basis_.size(); ++r) {
    if (!basis_[r]) continue;
    const std::size_t partner = complement(*basis_[r], dims_);
    for (std::size_t r2 = r + 1; r2 < basis_.size(); ++r2)
      if (basis_[r2] && *basis_[r2] == partner) return false;
  }
  return true;
}

void EqTableau::pivot(std::size_t row, std::size_t col) {
  if (row >= dims_.rows() || col >= dims_.num_cols())
    throw TableauError("pivot position out of range");
  const Rational p = entries_.at(row, col);
  if (p.is_zero()) throw TableauError("zero pivot element");
  entries_.scale_row(row, p.inverse());
  for (std::size_t r = 0; r < dims_.rows(); ++r) {
    if (r == row) continue;
    const Rational f = entries_.at(r, col);
    if (!f.is_zero()) entries_.add_row_multiple(r, row, -f);
  }
  if (row < dims_.upper()) basis_[row] = col;
}

std::optional<EqSolution> EqTableau::basic_solution() const {
  EqSolution sol;
  sol.z.assign(dims_.num_cols(), Rational(0));
  for (std::size_t r = 0; r < dims_.upper(); ++r) {
    if (!basis_[r]) return std::nullopt;
    sol.z[*basis_[r]] = q(r);
  }
  return sol;
}

void EqTableau::detect_basis() {
  for (std::size_t r = 0; r < dims_.upper(); ++r) {
    basis_[r] = std::nullopt;
    for (std::size_t c = 0; c < dims_.num_cols(); ++c) {
      if (entries_.at(r, c) != Rational(1)) continue;
      bool unit = true;
      for (std::size_t r2 = 0; r2 < dims_.rows(); ++r2) {
        if (r2 != r && !entries_.at(r2, c).is_zero()) {
          unit = false;
          break;
        }
      }
      if (unit) {
        basis_[r] = c;
        break;
      }
    }
  }
}

EqCheckReport verify_eq_solution(const CanonicalLp& lp, const EqTableau& t0,
                                 const EqSolution& z) {
  const EqDims& d = t0.dims();
  if (z.z.size() != d.num_cols())
    throw TableauError("solution length does not match tableau");

  EqCheckReport rep;
  rep.residuals.resize(d.rows());
  rep.equations_ok = true;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    Rational acc;
    for (std::size_t c = 0; c < d.num_cols(); ++c) acc += t0.entry(r, c) * z.z[c];
    rep.residuals[r] = acc - t0.q(r);
    if (!rep.residuals[r].is_zero()) rep.equations_ok = false;
  }

  rep.nonnegative_ok = true;
  for (std::size_t j = 0; j < z.z.size(); ++j) {
    if (z.z[j].sign() < 0) {
      rep.nonnegative_ok = false;
      rep.negative_components.push_back(j);
    }
  }

  rep.complementarity_ok = true;
  for (std::size_t j = 0; j < d.upper(); ++j) {
    if (!(z.z[j] * z.z[complement(j, d)]).is_zero()) {
      rep.complementarity_ok = false;
      rep.violating_pairs.push_back(j);
    }
  }

  const auto x = z.extract_x(d);
  const auto y = z.extract_y(d);
  const auto Ax = mat_vec(lp.A, x);
  rep.primal_feasible = true;
  for (std::size_t i = 0; i < lp.m(); ++i)
    if (Ax[i] > lp.b[i]) rep.primal_feasible = false;
  for (const auto& v : x)
    if (v.sign() < 0) rep.primal_feasible = false;

  rep.dual_feasible = true;
  for (std::size_t j = 0; j < lp.n(); ++j) {
    Rational aty;
    for (std::size_t i = 0; i < lp.m(); ++i) aty += lp.A.at(i, j) * y[i];
    if (aty < lp.c[j]) rep.dual_feasible = false;
  }
  for (const auto& v : y)
    if (v.sign() < 0) rep.dual_feasible = false;

  rep.primal_objective = dot(lp.c, x);
  rep.dual_objective = dot(lp.b, y);
  rep.zero_gap = rep.primal_objective == rep.dual_objective;
  return rep;
}

EqCheckReport verify_eq_solution(const CanonicalLp& lp, const EqSolution& z) {
  return verify_eq_solution(lp, EqTableau::build(lp, Rational(0)), z);
}

PrSystem reduce_to_pr(const EqTableau& t, const EqSolution& z,
                      std::size_t col_a, std::size_t col_b) {
  const EqDims& d = t.dims();
  if (col_a >= d.num_cols() || col_b >= d.num_cols() || col_a == col_b)
    throw TableauError("reduce_to_pr: bad designated columns");
  if (z.z.size() != d.num_cols())
    throw TableauError("reduce_to_pr: solution length mismatch");
  if (t.gap_entry(col_a).sign() <= 0 || t.gap_entry(col_b).sign() <= 0)
    throw TableauError("reduce_to_pr: designated columns need positive gap-row entries");
  if ((z.z[col_a] + z.z[col_b]).sign() <= 0)
    throw TableauError("reduce_to_pr: designated pair carries no solution weight");

  // the m+n unit columns, ordered by their unit row
  std::vector<std::size_t> unit_cols;
  unit_cols.reserve(d.upper());
  EqTableau scan = t;
  if (!scan.basis_complete()) scan.detect_basis();
  for (std::size_t r = 0; r < d.upper(); ++r) {
    auto b = scan.basic_col_of_row(r);
    if (!b) throw TableauError("reduce_to_pr: row " + std::to_string(r + 1) +
                               " has no unit column");
    if (*b == col_a || *b == col_b)
      throw TableauError("reduce_to_pr: designated column is a unit column");
    unit_cols.push_back(*b);
  }

  PrSystem pr;
  pr.column_origin = {col_a, col_b};
  pr.column_origin.insert(pr.column_origin.end(), unit_cols.begin(), unit_cols.end());
  pr.P = Matrix(d.rows(), d.upper() + 2);
  for (std::size_t k = 0; k < pr.column_origin.size(); ++k)
    for (std::size_t r = 0; r < d.rows(); ++r)
      pr.P.at(r, k) = t.entry(r, pr.column_origin[k]);

  pr.r.resize(d.rows());
  for (std::size_t r = 0; r < d.rows(); ++r) pr.r[r] = t.q(r);
  for (std::size_t c = 0; c < d.num_cols(); ++c) {
    if (std::find(pr.column_origin.begin(), pr.column_origin.end(), c) !=
        pr.column_origin.end())
      continue;
    pr.moved_columns.push_back(c);
    if (z.z[c].is_zero()) continue;
    for (std::size_t r = 0; r < d.rows(); ++r) pr.r[r] -= z.z[c] * t.entry(r, c);
  }
  return pr;
}

ShiftResult shifted_solution(const PrSystem& pr, const std::vector<Rational>& z) {
  const std::size_t rows = pr.P.rows();
  if (rows < 1) throw TableauError("shifted_solution: empty system");
  const std::size_t upper = rows - 1;
  if (z.size() != pr.P.cols())
    throw TableauError("shifted_solution: solution length mismatch");
  const Rational& g1 = pr.P.at(upper, 0);
  const Rational& g2 = pr.P.at(upper, 1);
  if (g1.sign() <= 0 || g2.sign() <= 0)
    throw TableauError("shifted_solution: lead columns need positive gap-row entries");
  if (pr.r[upper].sign() <= 0)
    throw TableauError("shifted_solution: gap-row right-hand side must be positive");

  ShiftResult out;
  out.f = g1 / g2;
  out.shifted.assign(z.size(), Rational(0));
  const Rational& t1 = z[0];
  out.shifted[1] = t1 * out.f + z[1];
  for (std::size_t i = 0; i < upper; ++i) {
    out.shifted[2 + i] = t1 * (pr.P.at(i, 0) - pr.P.at(i, 1) * out.f) + z[2 + i];
    if (out.shifted[2 + i].sign() < 0) out.negative_components.push_back(2 + i);
  }
  if (out.shifted[1].sign() < 0) out.negative_components.insert(out.negative_components.begin(), 1);
  return out;
}

EqSolution convex_witness(const EqTableau& t, const EqSolution& z_star,
                           const std::vector<std::size_t>& neg_rows) {
  const EqDims& d = t.dims();
  if (z_star.z.size() != d.num_cols())
    throw TableauError("convex_witness: solution length mismatch");
  if (!t.gap_q().is_zero())
    throw TableauError("convex_witness: gap-row right-hand side must be zero");

  std::vector<std::size_t> listed_cols;
  for (const std::size_t r : neg_rows) {
    if (r >= d.upper()) throw TableauError("convex_witness: row out of range");
    if (t.q(r).sign() >= 0)
      throw TableauError("convex_witness: listed row has nonnegative q");
    const auto b = t.basic_col_of_row(r);
    if (!b) throw TableauError("convex_witness: listed row has no basic column");
    listed_cols.push_back(*b);
  }

  // first branch: z_star already has a zero listed component
  for (const std::size_t c : listed_cols)
    if (z_star.z[c].is_zero()) return z_star;

  // z_hat reads q into every basic slot (an infeasible solution of the system)
  EqSolution z_hat;
  z_hat.z.assign(d.num_cols(), Rational(0));
  for (std::size_t r = 0; r < d.upper(); ++r)
    if (auto b = t.basic_col_of_row(r)) z_hat.z[*b] = t.q(r);

  // smallest lambda making every listed component of
  // lambda*z_star + (1-lambda)*z_hat nonnegative; attained with equality on
  // the maximizing row, so at least one listed component lands exactly on 0
  Rational lambda(0);
  for (std::size_t k = 0; k < neg_rows.size(); ++k) {
    const Rational aq = t.q(neg_rows[k]).abs();
    const Rational cand = aq / (z_star.z[listed_cols[k]] + aq);
    if (cand > lambda) lambda = cand;
  }

  EqSolution out;
  out.z.resize(d.num_cols());
  const Rational one_minus = Rational(1) - lambda;
  for (std::size_t j = 0; j < d.num_cols(); ++j)
    out.z[j] = lambda * z_star.z[j] + one_minus * z_hat.z[j];
  return out;
}

std::string tableau_to_json(const EqTableau& t) {
  ordered_json j;
  j["m"] = t.dims().m;
  j["n"] = t.dims().n;
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < t.dims().rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c <= t.dims().rhs_col(); ++c)
      row.push_back(t.entry(r, c).str());
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  ordered_json basis = ordered_json::array();
  for (const auto& b : t.basis()) {
    if (b) basis.push_back(*b);
    else basis.push_back(nullptr);
  }
  j["basis"] = std::move(basis);
  ordered_json pairs = ordered_json::array();
  for (std::size_t c = 0; c < t.dims().upper(); ++c)
    pairs.push_back(ordered_json::array({c, complement(c, t.dims())}));
  j["pairs"] = std::move(pairs);
  return j.dump(2);
}

EqTableau tableau_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  EqDims dims{j.at("m").get<std::size_t>(), j.at("n").get<std::size_t>()};
  Matrix entries(dims.rows(), dims.rhs_col() + 1);
  const auto& rows = j.at("entries");
  if (rows.size() != dims.rows()) throw TableauError("tableau json: wrong row count");
  for (std::size_t r = 0; r < dims.rows(); ++r) {
    const auto& row = rows.at(r);
    if (row.size() != dims.rhs_col() + 1)
      throw TableauError("tableau json: wrong column count in row " + std::to_string(r + 1));
    for (std::size_t c = 0; c <= dims.rhs_col(); ++c)
      entries.at(r, c) = Rational::from_string(row.at(c).get<std::string>());
  }
  std::vector<std::optional<std::size_t>> basis(dims.upper());
  if (j.contains("basis")) {
    const auto& b = j.at("basis");
    if (b.size() != dims.upper()) throw TableauError("tableau json: wrong basis size");
    for (std::size_t r = 0; r < dims.upper(); ++r)
      if (!b.at(r).is_null()) basis[r] = b.at(r).get<std::size_t>();
  }
  EqTableau t(dims, std::move(entries), std::move(basis));
  if (!t.basis_complete()) t.detect_basis();
  return t;
}

}  // namespace complp
