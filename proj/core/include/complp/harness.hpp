#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "complp/generators.hpp"
#include "complp/lp_model.hpp"
#include "complp/pivot_engine.hpp"
#include "complp/simplex_oracle.hpp"

namespace complp {

enum class Verdict { Agree, Disagree, EngineInconclusive };

enum class DisagreeKind {
  WrongOptimum,      // engine Solved, oracle Optimal, objectives differ
  SolvedInfeasible,  // engine Solved, oracle Infeasible
  SolvedUnbounded,   // engine Solved, oracle Unbounded
  MissedSolution,    // engine NoSolution, oracle Optimal
};

const char* to_string(Verdict v);
const char* to_string(DisagreeKind k);

/// One instance, both solvers, machine-checked verdict.
struct ComparisonRecord {
  std::string instance_id;
  std::size_t m = 0, n = 0;  // canonical dimensions

  std::string engine_status;
  std::size_t major_count = 0, minor_count = 0, total_pivots = 0;
  std::optional<Rational> engine_objective;
  std::vector<FalsificationKind> events;

  std::string oracle_status;
  std::optional<Rational> oracle_objective;
  std::size_t oracle_pivots = 0;

  Verdict verdict = Verdict::EngineInconclusive;
  std::optional<DisagreeKind> disagree_kind;
  bool bound_holds = true;  // major_count <= m+n
  bool oracle_certificate_ok = false;
  // engine solutions are re-verified here even though run() already gated
  // them; a Solved result that fails this is classified inconclusive
  bool engine_solution_ok = true;

  std::string trace_ref;  // file name under the campaign output directory
};

/// Pure classification of a solver pair; exposed so fault-injection tests
/// can cover verdicts the gated engine cannot reach.
ComparisonRecord compare(const RunResult& engine, const OracleResult& oracle,
                         const CanonicalLp& can, const std::string& id);

/// Runs engine and oracle on one instance. Engine Solved results have
/// already passed the theta=0 gate; the oracle result is re-verified here.
ComparisonRecord differential_run(const GeneralLp& lp, const EngineConfig& cfg = {},
                                  const std::string& id = "adhoc");

struct CampaignConfig {
  std::vector<GeneratorSpec> templates;  // empty means default_campaign(max_m, max_n)
  std::size_t count = 100;
  std::uint64_t seed_base = 0;
  std::size_t max_m = 8, max_n = 8;
  EngineConfig engine;
  std::size_t workers = 0;  // 0 means hardware concurrency
  std::optional<std::filesystem::path> out_dir;  // evidence + reports live here
};

struct CampaignReport {
  std::size_t instances = 0;
  std::size_t agree = 0;
  std::size_t disagree = 0;
  std::size_t inconclusive = 0;
  std::size_t bound_violations = 0;
  std::map<std::string, std::size_t> disagree_by_kind;
  std::map<std::string, std::size_t> events_by_kind;
  std::map<std::string, std::size_t> engine_status_counts;
  std::map<std::string, std::size_t> oracle_status_counts;
  std::vector<std::string> counterexample_ids;  // Disagree or falsification events
  std::vector<ComparisonRecord> records;

  /// One row per instance; stable column order, no timestamps.
  std::string to_csv() const;
  /// Aggregate summary; deterministic field order, no timestamps.
  std::string to_json() const;
};

/// Deterministic differential campaign. Records are ordered by instance
/// index regardless of worker count. When out_dir is set, evidence records
/// (instance file + trace JSONL) are persisted for every record that is
/// not a plain agreement.
CampaignReport fuzz(const CampaignConfig& cfg);

/// Greedy counterexample minimization: repeatedly drop a constraint, drop a
/// variable, or zero one coefficient, keeping changes that preserve the
/// predicate; runs to a fixpoint.
GeneralLp shrink(const GeneralLp& lp,
                 const std::function<bool(const ComparisonRecord&)>& predicate,
                 const EngineConfig& cfg = {});

}  // namespace complp
