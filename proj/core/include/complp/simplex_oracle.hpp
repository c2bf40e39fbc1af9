#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "complp/lp_model.hpp"

namespace complp {

/// Bland guarantees termination and is the referee default. Dantzig (most
/// negative reduced cost, no anti-cycling) exists to demonstrate cycling on
/// the classical instances.
enum class PivotRule { Bland, Dantzig };

struct OracleConfig {
  PivotRule rule = PivotRule::Bland;
  std::size_t pivot_budget = 1u << 20;
};

struct OptimalCertificate {
  std::vector<Rational> x;
  std::vector<Rational> y;
  Rational objective;
};

struct InfeasibleCertificate {
  std::vector<Rational> u;  // u >= 0, u.A >= 0, u.b < 0
};

struct UnboundedCertificate {
  std::vector<Rational> point;  // feasible
  std::vector<Rational> ray;    // ray >= 0, A.ray <= 0, c.ray > 0
};

struct OracleResult {
  enum class Status { Optimal, Infeasible, Unbounded, BudgetExceeded };

  Status status = Status::BudgetExceeded;
  std::optional<OptimalCertificate> optimal;
  std::optional<InfeasibleCertificate> infeasible;
  std::optional<UnboundedCertificate> unbounded;
  std::size_t pivot_count = 0;
};

/// Two-phase primal simplex over exact rationals on a dense tableau.
OracleResult simplex_solve(const CanonicalLp& lp, const OracleConfig& cfg = {});

/// Re-derives every claim in the result from scratch. The oracle is never
/// trusted without this.
bool verify_certificate(const CanonicalLp& lp, const OracleResult& result);

const char* to_string(OracleResult::Status s);

}  // namespace complp
