#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "complp/harness.hpp"

using namespace complp;

namespace {

GeneralLp paper_instance() { return generate(PaperIllustrationSpec{}); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("differential run agrees on the worked instance") {
  const ComparisonRecord rec = differential_run(paper_instance(), {}, "paper");
  CHECK(rec.verdict == Verdict::Agree);
  CHECK(rec.engine_objective == Rational(7));
  CHECK(rec.oracle_objective == Rational(7));
  CHECK(rec.m + rec.n == 4);
  CHECK(rec.bound_holds);
  CHECK(rec.oracle_certificate_ok);
}

TEST_CASE("differential run agrees on an infeasible instance") {
  GeneralLp lp;
  lp.objective = {Rational(1)};
  lp.constraints = {{{Rational(1)}, Relation::LessEq, Rational(1)},
                    {{Rational(-1)}, Relation::LessEq, Rational(-2)}};
  const ComparisonRecord rec = differential_run(lp);
  CHECK(rec.verdict == Verdict::Agree);
  CHECK(rec.engine_status == "NoSolution");
  CHECK(rec.oracle_status == "Infeasible");
}

TEST_CASE("injected fault is classified WrongOptimum") {
  // the soundness gate makes this unreachable through run(); feed the
  // classifier a doctored result to cover the record kind
  const CanonicalLp can = canonicalize(paper_instance());
  RunResult engine = run(can);
  REQUIRE(engine.status == RunResult::Status::Solved);
  engine.objective = Rational(8);
  const OracleResult oracle = simplex_solve(can);
  const ComparisonRecord rec = compare(engine, oracle, can, "fault");
  CHECK(rec.verdict == Verdict::Disagree);
  CHECK(rec.disagree_kind == DisagreeKind::WrongOptimum);
}

TEST_CASE("solved-versus-infeasible faults are classified too") {
  const CanonicalLp can = canonicalize(paper_instance());
  RunResult engine = run(can);
  OracleResult fake;
  fake.status = OracleResult::Status::Infeasible;
  fake.infeasible = InfeasibleCertificate{{Rational(1), Rational(1)}};
  const ComparisonRecord rec = compare(engine, fake, can, "fault2");
  CHECK(rec.verdict == Verdict::Disagree);
  CHECK(rec.disagree_kind == DisagreeKind::SolvedInfeasible);
}

TEST_CASE("a corrupted engine solution is caught by the harness re-check") {
  const CanonicalLp can = canonicalize(paper_instance());
  RunResult engine = run(can);
  REQUIRE(engine.status == RunResult::Status::Solved);
  engine.solution->z[0] += Rational(1);
  const ComparisonRecord rec = compare(engine, simplex_solve(can), can, "fault3");
  CHECK_FALSE(rec.engine_solution_ok);
  CHECK(rec.verdict == Verdict::EngineInconclusive);
}

TEST_CASE("campaigns are deterministic and parallel-invariant") {
  CampaignConfig cfg;
  cfg.count = 120;
  cfg.seed_base = 77;
  cfg.max_m = 4;
  cfg.max_n = 4;

  cfg.workers = 1;
  const CampaignReport serial = fuzz(cfg);
  cfg.workers = 4;
  const CampaignReport parallel = fuzz(cfg);

  CHECK(serial.to_csv() == parallel.to_csv());
  CHECK(serial.to_json() == parallel.to_json());
  CHECK(serial.instances == 120);
  CHECK(serial.agree + serial.disagree + serial.inconclusive == 120);
}

TEST_CASE("campaign reports never contain an unverified oracle result") {
  CampaignConfig cfg;
  cfg.count = 150;
  cfg.seed_base = 3003;
  cfg.max_m = 5;
  cfg.max_n = 5;
  const CampaignReport report = fuzz(cfg);
  for (const auto& rec : report.records) {
    CHECK(rec.oracle_certificate_ok);
    CHECK(rec.disagree_kind != DisagreeKind::WrongOptimum);
  }
}

TEST_CASE("evidence records regenerate and replay") {
  const auto dir = std::filesystem::temp_directory_path() / "complp_harness_test";
  std::filesystem::remove_all(dir);

  CampaignConfig cfg;
  cfg.count = 200;
  cfg.seed_base = 42;
  cfg.max_m = 5;
  cfg.max_n = 5;
  cfg.out_dir = dir;
  const CampaignReport report = fuzz(cfg);

  CHECK(std::filesystem::exists(dir / "campaign.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));

  std::size_t replayed = 0;
  for (const auto& rec : report.records) {
    if (rec.trace_ref.empty()) continue;
    // the id alone regenerates the instance
    const GeneralLp lp = regenerate(rec.instance_id);
    CHECK(std::filesystem::exists(dir / "counterexamples" / (rec.instance_id + ".lp")));
    CHECK(parse_instance(slurp(dir / "counterexamples" / (rec.instance_id + ".lp"))) == lp);
    const auto trace = trace_from_jsonl(slurp(dir / "counterexamples" / rec.trace_ref));
    CHECK_NOTHROW(replay(trace));
    ++replayed;
  }
  CHECK(replayed > 0);  // this corpus is known to produce evidence
  std::filesystem::remove_all(dir);
}

TEST_CASE("shrink removes a planted redundant constraint") {
  GeneralLp lp = paper_instance();
  Constraint redundant;
  redundant.coeffs = {Rational(1), Rational(1)};
  redundant.rel = Relation::LessEq;
  redundant.rhs = Rational(100);  // dominated by x1 + x2 <= 5
  lp.constraints.push_back(redundant);

  const auto agrees_at_seven = [](const ComparisonRecord& rec) {
    return rec.verdict == Verdict::Agree && rec.engine_objective &&
           *rec.engine_objective == Rational(7);
  };
  const GeneralLp small = shrink(lp, agrees_at_seven);
  CHECK(small.num_constraints() < lp.num_constraints());

  // fixpoint: shrinking again changes nothing
  CHECK(shrink(small, agrees_at_seven) == small);
}

TEST_CASE("shrink demands the predicate hold initially") {
  const auto never = [](const ComparisonRecord&) { return false; };
  CHECK_THROWS_AS(shrink(paper_instance(), never), ModelError);
}
