#include <doctest.h>

#include "complp/generators.hpp"
#include "complp/simplex_oracle.hpp"

using namespace complp;

namespace {

CanonicalLp make_canonical(const std::vector<std::vector<long>>& A,
                           const std::vector<long>& b, const std::vector<long>& c) {
  GeneralLp lp;
  lp.sense = Sense::Maximize;
  for (const long v : c) lp.objective.push_back(Rational(v));
  for (std::size_t i = 0; i < A.size(); ++i) {
    Constraint con;
    for (const long v : A[i]) con.coeffs.push_back(Rational(v));
    con.rhs = Rational(b[i]);
    lp.constraints.push_back(con);
  }
  return canonicalize(lp);
}

}  // namespace

TEST_CASE("worked instance: optimum with exact dual") {
  const CanonicalLp lp = canonicalize(generate(PaperIllustrationSpec{}));
  const OracleResult res = simplex_solve(lp);
  REQUIRE(res.status == OracleResult::Status::Optimal);
  CHECK(res.optimal->objective == Rational(7));
  CHECK(res.optimal->x == std::vector<Rational>{Rational(2), Rational(3)});
  CHECK(res.optimal->y == std::vector<Rational>{Rational(1), Rational(1)});
  CHECK(verify_certificate(lp, res));
}

TEST_CASE("infeasible instance yields a Farkas certificate") {
  const CanonicalLp lp = make_canonical({{1}, {-1}}, {1, -2}, {1});
  const OracleResult res = simplex_solve(lp);
  REQUIRE(res.status == OracleResult::Status::Infeasible);
  CHECK(res.infeasible->u == std::vector<Rational>{Rational(1), Rational(1)});
  CHECK(verify_certificate(lp, res));
}

TEST_CASE("unbounded instance yields a ray") {
  const CanonicalLp lp = make_canonical({{0}}, {1}, {1});
  const OracleResult res = simplex_solve(lp);
  REQUIRE(res.status == OracleResult::Status::Unbounded);
  CHECK(res.unbounded->ray == std::vector<Rational>{Rational(1)});
  CHECK(verify_certificate(lp, res));
}

TEST_CASE("no-constraint instances") {
  GeneralLp lp;
  lp.objective = {Rational(-1), Rational(-2)};
  const OracleResult res = simplex_solve(canonicalize(lp));
  REQUIRE(res.status == OracleResult::Status::Optimal);
  CHECK(res.optimal->objective == Rational(0));

  lp.objective = {Rational(1)};
  const OracleResult unb = simplex_solve(canonicalize(lp));
  CHECK(unb.status == OracleResult::Status::Unbounded);
}

TEST_CASE("Bland terminates on the cycling instance, the naive rule does not") {
  const CanonicalLp beale = canonicalize(generate(BealeSpec{}));

  OracleConfig bland;
  bland.pivot_budget = 100;
  const OracleResult ok = simplex_solve(beale, bland);
  REQUIRE(ok.status == OracleResult::Status::Optimal);
  CHECK(ok.optimal->objective == Rational(1, 20));
  CHECK(ok.pivot_count <= 100);
  CHECK(verify_certificate(beale, ok));

  OracleConfig naive;
  naive.rule = PivotRule::Dantzig;
  naive.pivot_budget = 100;
  const OracleResult stuck = simplex_solve(beale, naive);
  CHECK(stuck.status == OracleResult::Status::BudgetExceeded);
  CHECK(stuck.pivot_count == 100);
  CHECK_FALSE(verify_certificate(beale, stuck));
}

TEST_CASE("negative certificate checks") {
  const CanonicalLp lp = canonicalize(generate(PaperIllustrationSpec{}));
  OracleResult res = simplex_solve(lp);
  REQUIRE(res.status == OracleResult::Status::Optimal);

  SUBCASE("perturbed objective fails") {
    res.optimal->objective += Rational(1);
    CHECK_FALSE(verify_certificate(lp, res));
  }
  SUBCASE("infeasible x fails") {
    res.optimal->x[0] = Rational(100);
    CHECK_FALSE(verify_certificate(lp, res));
  }
  SUBCASE("negative Farkas entry fails") {
    OracleResult fake;
    fake.status = OracleResult::Status::Infeasible;
    fake.infeasible = InfeasibleCertificate{{Rational(-1), Rational(1)}};
    CHECK_FALSE(verify_certificate(lp, fake));
  }
}

TEST_CASE("certificate sweep with exact complementary slackness") {
  std::size_t optimal = 0, infeasible = 0, unbounded = 0;
  for (const auto& entry : corpus(default_campaign(3, 3), 200, 5150)) {
    const CanonicalLp can = canonicalize(entry.lp);
    const OracleResult res = simplex_solve(can);
    REQUIRE(verify_certificate(can, res));
    switch (res.status) {
      case OracleResult::Status::Optimal: {
        ++optimal;
        const auto& cert = *res.optimal;
        const auto Ax = mat_vec(can.A, cert.x);
        for (std::size_t j = 0; j < can.n(); ++j) {
          Rational aty;
          for (std::size_t i = 0; i < can.m(); ++i) aty += can.A.at(i, j) * cert.y[i];
          CHECK(cert.x[j] * (aty - can.c[j]) == Rational(0));
        }
        for (std::size_t i = 0; i < can.m(); ++i)
          CHECK(cert.y[i] * (can.b[i] - Ax[i]) == Rational(0));
        break;
      }
      case OracleResult::Status::Infeasible: ++infeasible; break;
      case OracleResult::Status::Unbounded: ++unbounded; break;
      case OracleResult::Status::BudgetExceeded: FAIL("Bland must terminate"); break;
    }
  }
  CHECK(optimal > 0);
  CHECK(infeasible > 0);
  CHECK(unbounded > 0);
}
