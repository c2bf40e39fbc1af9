#include "complp/simplex_oracle.hpp"

#include <algorithm>

namespace complp {

namespace {

/// Dense phase-aware simplex tableau for max c.x, Ax <= b, x >= 0,
/// rewritten internally as a minimization over (x, slacks, artificials).
/// Rows with negative right-hand side are negated up front; those rows get
/// artificial variables for phase 1.
class SimplexState {
 public:
  SimplexState(const CanonicalLp& lp, const OracleConfig& cfg)
      : m_(lp.m()), n_(lp.n()), cfg_(cfg) {
    negated_.assign(m_, false);
    std::vector<std::size_t> art_rows;
    for (std::size_t i = 0; i < m_; ++i)
      if (lp.b[i].sign() < 0) {
        negated_[i] = true;
        art_rows.push_back(i);
      }
    nart_ = art_rows.size();
    ncols_ = n_ + m_ + nart_;
    T_ = Matrix(m_, ncols_ + 1);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational sgn(negated_[i] ? -1 : 1);
      for (std::size_t j = 0; j < n_; ++j) T_.at(i, j) = sgn * lp.A.at(i, j);
      T_.at(i, n_ + i) = sgn;
      T_.at(i, ncols_) = sgn * lp.b[i];
      basis_[i] = n_ + i;
    }
    for (std::size_t k = 0; k < nart_; ++k) {
      T_.at(art_rows[k], n_ + m_ + k) = Rational(1);
      basis_[art_rows[k]] = n_ + m_ + k;
    }
  }

  enum class Step { Optimal, Unbounded, Budget };

  std::vector<Rational> reduced_costs(const std::vector<Rational>& cost) const {
    std::vector<Rational> rc(ncols_);
    std::vector<Rational> cb(m_);
    for (std::size_t i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
    for (std::size_t j = 0; j < ncols_; ++j) {
      Rational zj;
      for (std::size_t i = 0; i < m_; ++i)
        if (!cb[i].is_zero()) zj += cb[i] * T_.at(i, j);
      rc[j] = cost[j] - zj;
    }
    return rc;
  }

  /// Runs pivots for the given minimization cost until optimal, unbounded,
  /// or the budget runs out; `allowed` limits the entering columns.
  Step iterate(const std::vector<Rational>& cost, std::size_t allowed) {
    while (pivots_ < cfg_.pivot_budget) {
      const auto rc = reduced_costs(cost);
      std::optional<std::size_t> entering;
      if (cfg_.rule == PivotRule::Bland) {
        for (std::size_t j = 0; j < allowed; ++j)
          if (rc[j].sign() < 0) {
            entering = j;
            break;
          }
      } else {
        Rational best(0);
        for (std::size_t j = 0; j < allowed; ++j)
          if (rc[j] < best) {
            best = rc[j];
            entering = j;
          }
      }
      if (!entering) return Step::Optimal;
      const std::size_t ent = *entering;

      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        if (T_.at(i, ent).sign() <= 0) continue;
        const Rational ratio = T_.at(i, ncols_) / T_.at(i, ent);
        if (!leaving || ratio < best_ratio) {
          leaving = i;
          best_ratio = ratio;
        } else if (ratio == best_ratio) {
          // Bland breaks ties on the smallest basic-variable index; the
          // naive rule keeps the topmost row, which is what lets the
          // classical examples cycle.
          if (cfg_.rule == PivotRule::Bland && basis_[i] < basis_[*leaving]) leaving = i;
        }
      }
      if (!leaving) {
        unbounded_col_ = ent;
        return Step::Unbounded;
      }
      pivot(*leaving, ent);
    }
    return Step::Budget;
  }

  void pivot(std::size_t r, std::size_t c) {
    T_.scale_row(r, T_.at(r, c).inverse());
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const Rational f = T_.at(i, c);
      if (!f.is_zero()) T_.add_row_multiple(i, r, -f);
    }
    basis_[r] = c;
    ++pivots_;
  }

  OracleResult solve(const CanonicalLp& lp) {
    OracleResult out;

    if (nart_ > 0) {
      std::vector<Rational> cost1(ncols_, Rational(0));
      for (std::size_t k = 0; k < nart_; ++k) cost1[n_ + m_ + k] = Rational(1);
      const Step st = iterate(cost1, ncols_);
      if (st == Step::Budget) {
        out.status = OracleResult::Status::BudgetExceeded;
        out.pivot_count = pivots_;
        return out;
      }
      Rational phase1;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= n_ + m_) phase1 += T_.at(i, ncols_);
      if (phase1.sign() > 0) {
        // infeasible; the Farkas vector is read off the slack reduced costs
        const auto rc = reduced_costs(cost1);
        InfeasibleCertificate cert;
        cert.u.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) cert.u[i] = rc[n_ + i];
        out.status = OracleResult::Status::Infeasible;
        out.infeasible = std::move(cert);
        out.pivot_count = pivots_;
        return out;
      }
      // drive zero-level artificials out of the basis where possible
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] < n_ + m_) continue;
        for (std::size_t j = 0; j < n_ + m_; ++j) {
          if (!T_.at(i, j).is_zero()) {
            pivot(i, j);
            break;
          }
        }
      }
    }

    std::vector<Rational> cost2(ncols_, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) cost2[j] = -lp.c[j];
    const Step st = iterate(cost2, n_ + m_);
    out.pivot_count = pivots_;
    if (st == Step::Budget) {
      out.status = OracleResult::Status::BudgetExceeded;
      return out;
    }
    if (st == Step::Unbounded) {
      UnboundedCertificate cert;
      cert.point.assign(n_, Rational(0));
      cert.ray.assign(n_, Rational(0));
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] < n_) cert.point[basis_[i]] = T_.at(i, ncols_);
      if (*unbounded_col_ < n_) cert.ray[*unbounded_col_] = Rational(1);
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] < n_) cert.ray[basis_[i]] = -T_.at(i, *unbounded_col_);
      out.status = OracleResult::Status::Unbounded;
      out.unbounded = std::move(cert);
      return out;
    }

    OptimalCertificate cert;
    cert.x.assign(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) cert.x[basis_[i]] = T_.at(i, ncols_);
    const auto rc = reduced_costs(cost2);
    cert.y.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) cert.y[i] = rc[n_ + i];
    cert.objective = dot(lp.c, cert.x);
    out.status = OracleResult::Status::Optimal;
    out.optimal = std::move(cert);
    return out;
  }

 private:
  std::size_t m_, n_, nart_ = 0, ncols_ = 0;
  OracleConfig cfg_;
  Matrix T_;
  std::vector<std::size_t> basis_;
  std::vector<bool> negated_;
  std::size_t pivots_ = 0;
  std::optional<std::size_t> unbounded_col_;
};

}  // namespace

OracleResult simplex_solve(const CanonicalLp& lp, const OracleConfig& cfg) {
  return SimplexState(lp, cfg).solve(lp);
}

bool verify_certificate(const CanonicalLp& lp, const OracleResult& result) {
  switch (result.status) {
    case OracleResult::Status::Optimal: {
      if (!result.optimal) return false;
      const auto& cert = *result.optimal;
      if (cert.x.size() != lp.n() || cert.y.size() != lp.m()) return false;
      for (const auto& v : cert.x)
        if (v.sign() < 0) return false;
      for (const auto& v : cert.y)
        if (v.sign() < 0) return false;
      const auto Ax = mat_vec(lp.A, cert.x);
      for (std::size_t i = 0; i < lp.m(); ++i)
        if (Ax[i] > lp.b[i]) return false;
      for (std::size_t j = 0; j < lp.n(); ++j) {
        Rational aty;
        for (std::size_t i = 0; i < lp.m(); ++i) aty += lp.A.at(i, j) * cert.y[i];
        if (aty < lp.c[j]) return false;
      }
      if (dot(lp.c, cert.x) != cert.objective) return false;
      return dot(lp.b, cert.y) == cert.objective;
    }
    case OracleResult::Status::Infeasible: {
      if (!result.infeasible) return false;
      const auto& u = result.infeasible->u;
      if (u.size() != lp.m()) return false;
      for (const auto& v : u)
        if (v.sign() < 0) return false;
      for (std::size_t j = 0; j < lp.n(); ++j) {
        Rational uta;
        for (std::size_t i = 0; i < lp.m(); ++i) uta += u[i] * lp.A.at(i, j);
        if (uta.sign() < 0) return false;
      }
      return dot(u, lp.b).sign() < 0;
    }
    case OracleResult::Status::Unbounded: {
      if (!result.unbounded) return false;
      const auto& cert = *result.unbounded;
      if (cert.point.size() != lp.n() || cert.ray.size() != lp.n()) return false;
      for (const auto& v : cert.point)
        if (v.sign() < 0) return false;
      const auto Ap = mat_vec(lp.A, cert.point);
      for (std::size_t i = 0; i < lp.m(); ++i)
        if (Ap[i] > lp.b[i]) return false;
      for (const auto& v : cert.ray)
        if (v.sign() < 0) return false;
      const auto Ar = mat_vec(lp.A, cert.ray);
      for (std::size_t i = 0; i < lp.m(); ++i)
        if (Ar[i].sign() > 0) return false;
      return dot(lp.c, cert.ray).sign() > 0;
    }
    case OracleResult::Status::BudgetExceeded:
      return false;
  }
  return false;
}

const char* to_string(OracleResult::Status s) {
  switch (s) {
    case OracleResult::Status::Optimal: return "Optimal";
    case OracleResult::Status::Infeasible: return "Infeasible";
    case OracleResult::Status::Unbounded: return "Unbounded";
    case OracleResult::Status::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

}  // namespace complp
