#include <doctest.h>

#include <fstream>
#include <sstream>

#include "complp/eq_tableau.hpp"
#include "complp/generators.hpp"
#include "complp/simplex_oracle.hpp"

using namespace complp;

namespace {

CanonicalLp paper_lp() { return canonicalize(generate(PaperIllustrationSpec{})); }

Matrix from_rows(const std::vector<std::vector<long>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = Rational(rows[r][c]);
  return m;
}

std::vector<Rational> rats(const std::vector<long>& v) {
  std::vector<Rational> out;
  for (const long x : v) out.push_back(Rational(x));
  return out;
}

// the printed reference for the initial tableau; row 4 as printed carries q = -2
const std::vector<std::vector<long>> kMq1Printed = {
    {5, 2, -1, 0, 1, 0, 0, 0, 5},
    {5, 2, -1, -1, 0, 1, 0, 0, 2},
    {4, 1, -2, -1, 0, 0, 1, 0, -2},
    {4, 2, -2, -1, 0, 0, 0, 1, -2},
    {5, 2, -2, -1, 0, 0, 0, 0, 0},
};

EqTableau load_mq4() {
  std::ifstream in(std::string(COMPLP_FIXTURE_DIR) + "/mq4.json");
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return tableau_from_json(buf.str());
}

}  // namespace

TEST_CASE("build matches the printed initial tableau except the suspected typo") {
  const EqTableau t = EqTableau::build(paper_lp(), Rational(1));
  REQUIRE(t.dims().rows() == 5);
  REQUIRE(t.dims().num_cols() == 8);
  for (const std::size_t r : {0u, 1u, 2u, 4u})
    for (std::size_t c = 0; c < 9; ++c)
      CHECK(t.entries().at(r, c) == Rational(kMq1Printed[r][c]));
  // row 4: structural part agrees, the right-hand side comes out -1, not -2
  for (std::size_t c = 0; c < 8; ++c)
    CHECK(t.entry(3, c) == Rational(kMq1Printed[3][c]));
  CHECK(t.q(3) == Rational(-1));
}

TEST_CASE("theta=0 leaves the unit block in place") {
  const EqTableau t = EqTableau::build(paper_lp(), Rational(0));
  // gap row unchanged by theta
  CHECK(t.entries().row(4) == rats({5, 2, -2, -1, 0, 0, 0, 0, 0}));
  for (std::size_t c = 4; c < 8; ++c) {
    for (std::size_t r = 0; r < 5; ++r)
      CHECK(t.entry(r, c) == (r == c - 4 ? Rational(1) : Rational(0)));
  }
  CHECK(t.basis_complete());
  CHECK(t.basis_complementary());
}

TEST_CASE("complement pairing is the involution") {
  const EqDims d{2, 2};
  CHECK(complement(0, d) == 4);
  CHECK(complement(7, d) == 3);
  for (std::size_t nn = 1; nn <= 6; ++nn) {
    const EqDims dd{nn, 0};
    for (std::size_t c = 0; c < dd.num_cols(); ++c)
      CHECK(complement(complement(c, dd), dd) == c);
  }
  CHECK_THROWS_AS(complement(8, d), TableauError);
}

TEST_CASE("pivot reproduces the hand-computed gap row") {
  EqTableau t = EqTableau::build(paper_lp(), Rational(1));
  t.pivot(0, 0);
  for (std::size_t r = 0; r < 5; ++r)
    CHECK(t.entry(r, 0) == (r == 0 ? Rational(1) : Rational(0)));
  CHECK(t.entries().row(4) == rats({0, 0, -1, -1, -1, 0, 0, 0, -5}));
  CHECK(t.basic_col_of_row(0) == 0);
}

TEST_CASE("pivot on a unit column at its own row is the identity") {
  EqTableau t = EqTableau::build(paper_lp(), Rational(1));
  const EqTableau before = t;
  t.pivot(1, 5);  // column 5 is basic in row 1 already
  CHECK(t == before);
  CHECK_THROWS_AS(t.pivot(0, 3), TableauError);  // zero entry there
}

TEST_CASE("pivoting preserves the exact row space") {
  std::size_t checked = 0;
  for (const auto& entry : corpus({RandomSpec{0, 2, 2, 5, 100, false}}, 20, 99)) {
    EqTableau t = EqTableau::build(canonicalize(entry.lp), Rational(1));
    const Matrix original = t.entries();
    bool pivoted = false;
    for (std::size_t c = 0; c < 4 && !pivoted; ++c) {
      for (std::size_t r = 0; r < 4 && !pivoted; ++r) {
        if (!t.entry(r, c).is_zero()) {
          t.pivot(r, c);
          pivoted = true;
        }
      }
    }
    if (!pivoted) continue;
    CHECK(t.entries().rref() == original.rref());
    ++checked;
  }
  CHECK(checked >= 15);
}

TEST_CASE("basic solution reads q into basic slots") {
  const EqTableau t = EqTableau::build(paper_lp(), Rational(0));
  const auto sol = t.basic_solution();
  REQUIRE(sol);
  CHECK(sol->z == rats({0, 0, 0, 0, 5, 2, -2, -1}));

  // after a pivot the residual M z - q stays zero on every basic row
  EqTableau t2 = EqTableau::build(paper_lp(), Rational(1));
  t2.pivot(3, 3);
  const auto sol2 = t2.basic_solution();
  REQUIRE(sol2);
  for (std::size_t r = 0; r < t2.dims().rows(); ++r) {
    Rational acc;
    for (std::size_t c = 0; c < t2.dims().num_cols(); ++c)
      acc += t2.entry(r, c) * sol2->z[c];
    if (r < t2.dims().upper()) CHECK(acc == t2.q(r));
  }
}

TEST_CASE("solution verification against the theta=0 system") {
  const CanonicalLp lp = paper_lp();

  EqSolution star{rats({1, 1, 2, 3, 0, 0, 0, 0})};
  const auto good = verify_eq_solution(lp, star);
  CHECK(good.all_ok());
  CHECK(good.primal_objective == Rational(7));
  CHECK(good.dual_objective == Rational(7));

  EqSolution zero{rats({0, 0, 0, 0, 0, 0, 0, 0})};
  const auto zrep = verify_eq_solution(lp, zero);
  CHECK_FALSE(zrep.equations_ok);
  CHECK(zrep.residuals[0] == Rational(-5));

  EqSolution bad{rats({1, 1, 2, 3, 1, 0, 0, 0})};
  const auto brep = verify_eq_solution(lp, bad);
  CHECK_FALSE(brep.equations_ok);
  CHECK(brep.residuals[0] == Rational(1));
  CHECK_FALSE(brep.complementarity_ok);  // z_1 (y1) and z_5 (s1) both positive
}

TEST_CASE("reduction to [P r] reproduces the printed system") {
  const EqTableau t = load_mq4();
  const EqSolution z{rats({1, 1, 2, 3, 0, 0, 0, 0})};
  const PrSystem pr = reduce_to_pr(t, z, 7, 1);  // columns 8 and 2, 1-based

  CHECK(pr.column_origin == std::vector<std::size_t>{7, 1, 0, 5, 2, 3});
  const Matrix expectP = from_rows({{-1, 0, 1, 0, 0, 0},
                                    {12, 9, 0, 1, 0, 0},
                                    {-10, -7, 0, 0, 1, 0},
                                    {12, 9, 0, 0, 0, 1},
                                    {1, 1, 0, 0, 0, 0}});
  CHECK(pr.P == expectP);
  CHECK(pr.r == rats({1, 9, -5, 12, 1}));
  CHECK(pr.r.back().sign() > 0);
}

TEST_CASE("reduction with zero-weight moved columns leaves r = q") {
  const EqTableau t = load_mq4();
  const EqSolution z{rats({1, 1, 2, 3, 0, 0, 0, 0})};  // moved columns 5, 7 carry zero
  const PrSystem pr = reduce_to_pr(t, z, 7, 1);
  for (std::size_t r = 0; r < 5; ++r) CHECK(pr.r[r] == t.q(r));
}

TEST_CASE("reduction rejects hypothesis violations") {
  const EqTableau t = load_mq4();
  const EqSolution z{rats({1, 1, 2, 3, 0, 0, 0, 0})};
  CHECK_THROWS_AS(reduce_to_pr(t, z, 6, 1), TableauError);  // gap entry of col 7 is -1
  EqSolution zeroed{rats({1, 0, 2, 3, 0, 0, 0, 0})};
  CHECK_THROWS_AS(reduce_to_pr(t, zeroed, 7, 1), TableauError);  // z_a + z_b = 0
}

TEST_CASE("reduction satisfies the substitution identity on random systems") {
  Matrix dummy;
  std::size_t checked = 0;
  for (const auto& entry : corpus({RandomSpec{0, 2, 3, 4, 100, false}}, 40, 4242)) {
    CanonicalLp can = canonicalize(entry.lp);
    // force positive gap entries for columns 0 (needs b_0 > 0) and m (needs c_0 < 0)
    can.b[0] = Rational(3);
    can.c[0] = Rational(-2);
    const EqTableau base = EqTableau::build(can, Rational(0));
    const EqDims d = base.dims();

    // choose a nonnegative z with weight on the designated pair, set q := M z
    std::vector<Rational> z(d.num_cols());
    for (std::size_t c = 0; c < d.num_cols(); ++c)
      z[c] = Rational(static_cast<long>((c * 7 + checked * 3) % 4));
    z[0] = Rational(2);
    z[can.m()] = Rational(1);
    Matrix entries = base.entries();
    for (std::size_t r = 0; r < d.rows(); ++r) {
      Rational acc;
      for (std::size_t c = 0; c < d.num_cols(); ++c) acc += entries.at(r, c) * z[c];
      entries.at(r, d.rhs_col()) = acc;
    }
    std::vector<std::optional<std::size_t>> basis(d.upper());
    for (std::size_t r = 0; r < d.upper(); ++r) basis[r] = d.upper() + r;
    const EqTableau t(d, std::move(entries), std::move(basis));

    const PrSystem pr = reduce_to_pr(t, EqSolution{z}, 0, can.m());
    std::vector<Rational> zp = {z[0], z[can.m()]};
    for (std::size_t r = 0; r < d.upper(); ++r) zp.push_back(z[*t.basic_col_of_row(r)]);
    CHECK(mat_vec(pr.P, zp) == pr.r);
    CHECK(pr.r.back().sign() > 0);
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("shift examples") {
  PrSystem pr;
  pr.P = from_rows({{1, 2, 1}, {1, 1, 0}});
  pr.r = rats({4, 2});

  SUBCASE("hand-computed shift") {
    const ShiftResult s = shifted_solution(pr, rats({1, 1, 1}));
    CHECK(s.f == Rational(1));
    CHECK(s.shifted == rats({0, 2, 0}));
    CHECK(s.negative_components.empty());
    CHECK(mat_vec(pr.P, s.shifted) == pr.r);
  }

  SUBCASE("t1 = 0 leaves the solution unchanged") {
    const ShiftResult s = shifted_solution(pr, rats({0, 2, 0}));
    CHECK(s.shifted == rats({0, 2, 0}));
  }

  SUBCASE("negative component is reported, equation still exact") {
    PrSystem pr2;
    pr2.P = from_rows({{1, 3, 1}, {1, 1, 0}});
    pr2.r = rats({4, 2});
    const ShiftResult s = shifted_solution(pr2, rats({1, 1, 0}));
    CHECK(s.shifted == rats({0, 2, -2}));
    CHECK(s.negative_components == std::vector<std::size_t>{2});
    CHECK(mat_vec(pr2.P, s.shifted) == pr2.r);
  }

  SUBCASE("hypothesis violations throw") {
    PrSystem bad;
    bad.P = from_rows({{1, 2, 1}, {-1, 1, 0}});
    bad.r = rats({4, 2});
    CHECK_THROWS_AS(shifted_solution(bad, rats({1, 1, 1})), TableauError);
  }
}

TEST_CASE("witness examples") {
  SUBCASE("two negative rows, hand-computed combination") {
    // rows 0 and 1 carry q = -1 and -2; their basic columns 2 and 3 hold
    // z* = 2 and z* = 1; z* = (1, 0, 2, 1) solves both rows exactly
    const EqDims d{2, 0};
    Matrix e(3, 5);
    e.at(0, 0) = Rational(-3);
    e.at(0, 2) = Rational(1);
    e.at(0, 4) = Rational(-1);
    e.at(1, 0) = Rational(-3);
    e.at(1, 3) = Rational(1);
    e.at(1, 4) = Rational(-2);
    const EqTableau t(d, e, {2, 3});
    const EqSolution star{rats({1, 0, 2, 1})};
    const EqSolution out = convex_witness(t, star, {0, 1});
    // lambda = max(1/3, 2/3) = 2/3; listed components become 1 and 0
    CHECK(out.z[2] == Rational(1));
    CHECK(out.z[3] == Rational(0));
    for (std::size_t r = 0; r < 3; ++r) {
      Rational acc;
      for (std::size_t c = 0; c < 4; ++c) acc += t.entry(r, c) * out.z[c];
      CHECK(acc == t.q(r));
    }
  }

  SUBCASE("a zero listed component returns z* unchanged") {
    const EqTableau t = EqTableau::build(paper_lp(), Rational(0));
    const EqSolution star{rats({1, 1, 2, 3, 0, 0, 0, 0})};
    // rows 2 and 3 have q = -2 and -1 with basic columns 6 and 7, where z* is 0
    const EqSolution out = convex_witness(t, star, {2, 3});
    CHECK(out == star);
  }
}

TEST_CASE("optimal primal-dual pairs solve the combined system, for any theta") {
  std::size_t optimal = 0;
  for (const auto& entry : corpus(default_campaign(3, 3), 80, 1234)) {
    const CanonicalLp can = canonicalize(entry.lp);
    const OracleResult res = simplex_solve(can);
    if (res.status != OracleResult::Status::Optimal) continue;
    ++optimal;

    // assemble z = (y, x, s, t) from the verified certificate
    const auto& cert = *res.optimal;
    EqSolution z;
    z.z.reserve(2 * (can.m() + can.n()));
    z.z.insert(z.z.end(), cert.y.begin(), cert.y.end());
    z.z.insert(z.z.end(), cert.x.begin(), cert.x.end());
    const auto Ax = mat_vec(can.A, cert.x);
    for (std::size_t i = 0; i < can.m(); ++i) z.z.push_back(can.b[i] - Ax[i]);
    for (std::size_t j = 0; j < can.n(); ++j) {
      Rational aty;
      for (std::size_t i = 0; i < can.m(); ++i) aty += can.A.at(i, j) * cert.y[i];
      z.z.push_back(aty - can.c[j]);
    }
    CHECK(verify_eq_solution(can, z).all_ok());

    // row operations do not change the solution set: the same z satisfies
    // the theta=1 construction exactly
    const EqTableau t1 = EqTableau::build(can, Rational(1));
    for (std::size_t r = 0; r < t1.dims().rows(); ++r) {
      Rational acc;
      for (std::size_t c = 0; c < t1.dims().num_cols(); ++c)
        acc += t1.entry(r, c) * z.z[c];
      CHECK(acc == t1.q(r));
    }
  }
  CHECK(optimal > 10);
}

TEST_CASE("reconstruction is row-space equivalent to the printed fourth tableau") {
  const EqTableau rebuilt = EqTableau::build(paper_lp(), Rational(1));
  const EqTableau mq4 = load_mq4();
  CHECK(rebuilt.entries().rref() == mq4.entries().rref());

  // with the printed q4 = -2 the row spaces differ, which is the evidence
  // for treating that value as a typo
  Matrix printed = from_rows(kMq1Printed);
  CHECK_FALSE(printed.rref() == mq4.entries().rref());
}

TEST_CASE("tableau json round trip") {
  const EqTableau t = EqTableau::build(paper_lp(), Rational(1));
  const EqTableau back = tableau_from_json(tableau_to_json(t));
  CHECK(back == t);
}
