#include "complp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

namespace complp {

using ordered_json = nlohmann::ordered_json;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Agree: return "Agree";
    case Verdict::Disagree: return "Disagree";
    case Verdict::EngineInconclusive: return "EngineInconclusive";
  }
  return "?";
}

const char* to_string(DisagreeKind k) {
  switch (k) {
    case DisagreeKind::WrongOptimum: return "WrongOptimum";
    case DisagreeKind::SolvedInfeasible: return "SolvedInfeasible";
    case DisagreeKind::SolvedUnbounded: return "SolvedUnbounded";
    case DisagreeKind::MissedSolution: return "MissedSolution";
  }
  return "?";
}

ComparisonRecord compare(const RunResult& engine, const OracleResult& oracle,
                         const CanonicalLp& can, const std::string& id) {
  ComparisonRecord rec;
  rec.instance_id = id;
  rec.m = can.m();
  rec.n = can.n();
  rec.engine_status = to_string(engine.status);
  rec.major_count = engine.major_count;
  rec.minor_count = engine.minor_count;
  rec.total_pivots = engine.total_pivots;
  rec.engine_objective = engine.objective;
  rec.events = engine.events;
  rec.oracle_status = to_string(oracle.status);
  rec.oracle_pivots = oracle.pivot_count;
  if (oracle.optimal) rec.oracle_objective = oracle.optimal->objective;
  rec.bound_holds = engine.major_count <= can.m() + can.n();
  rec.oracle_certificate_ok = verify_certificate(can, oracle);
  if (engine.status == RunResult::Status::Solved)
    rec.engine_solution_ok =
        engine.solution && verify_eq_solution(can, *engine.solution).all_ok();

  const bool engine_solved =
      engine.status == RunResult::Status::Solved && rec.engine_solution_ok;
  const bool engine_nosol = engine.status == RunResult::Status::NoSolution;
  switch (oracle.status) {
    case OracleResult::Status::Optimal:
      if (engine_solved) {
        if (engine.objective && *engine.objective == oracle.optimal->objective) {
          rec.verdict = Verdict::Agree;
        } else {
          rec.verdict = Verdict::Disagree;
          rec.disagree_kind = DisagreeKind::WrongOptimum;
        }
      } else if (engine_nosol) {
        rec.verdict = Verdict::Disagree;
        rec.disagree_kind = DisagreeKind::MissedSolution;
      } else {
        rec.verdict = Verdict::EngineInconclusive;
      }
      break;
    case OracleResult::Status::Infeasible:
    case OracleResult::Status::Unbounded:
      if (engine_nosol) {
        rec.verdict = Verdict::Agree;
      } else if (engine_solved) {
        rec.verdict = Verdict::Disagree;
        rec.disagree_kind = oracle.status == OracleResult::Status::Infeasible
                                ? DisagreeKind::SolvedInfeasible
                                : DisagreeKind::SolvedUnbounded;
      } else {
        rec.verdict = Verdict::EngineInconclusive;
      }
      break;
    case OracleResult::Status::BudgetExceeded:
      rec.verdict = Verdict::EngineInconclusive;
      break;
  }
  return rec;
}

ComparisonRecord differential_run(const GeneralLp& lp, const EngineConfig& cfg,
                                  const std::string& id) {
  const CanonicalLp can = canonicalize(lp);
  const RunResult engine = run(can, cfg);
  const OracleResult oracle = simplex_solve(can);
  return compare(engine, oracle, can, id);
}

namespace {

bool needs_evidence(const ComparisonRecord& rec) {
  return rec.verdict != Verdict::Agree || !rec.events.empty();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

std::string events_field(const std::vector<FalsificationKind>& events) {
  std::string out;
  for (const auto e : events) {
    if (!out.empty()) out += "+";
    out += to_string(e);
  }
  return out;
}

}  // namespace

std::string CampaignReport::to_csv() const {
  std::ostringstream out;
  out << "id,m,n,engineStatus,oracleStatus,verdict,disagreeKind,majorCount,minorCount,"
         "totalPivots,boundHolds,engineObjective,oracleObjective,events,traceRef\n";
  for (const auto& r : records) {
    out << csv_escape(r.instance_id) << "," << r.m << "," << r.n << "," << r.engine_status
        << "," << r.oracle_status << "," << to_string(r.verdict) << ","
        << (r.disagree_kind ? to_string(*r.disagree_kind) : "") << "," << r.major_count
        << "," << r.minor_count << "," << r.total_pivots << ","
        << (r.bound_holds ? "true" : "false") << ","
        << (r.engine_objective ? r.engine_objective->str() : "") << ","
        << (r.oracle_objective ? r.oracle_objective->str() : "") << ","
        << events_field(r.events) << "," << csv_escape(r.trace_ref) << "\n";
  }
  return out.str();
}

std::string CampaignReport::to_json() const {
  ordered_json j;
  j["instances"] = instances;
  j["agree"] = agree;
  j["disagree"] = disagree;
  j["inconclusive"] = inconclusive;
  j["boundViolations"] = bound_violations;
  j["disagreeByKind"] = disagree_by_kind;
  j["eventsByKind"] = events_by_kind;
  j["engineStatusCounts"] = engine_status_counts;
  j["oracleStatusCounts"] = oracle_status_counts;
  j["counterexampleIds"] = counterexample_ids;
  return j.dump(2);
}

CampaignReport fuzz(const CampaignConfig& cfg) {
  const auto templates = cfg.templates.empty() ? default_campaign(cfg.max_m, cfg.max_n)
                                               : cfg.templates;
  const auto entries = corpus(templates, cfg.count, cfg.seed_base);

  struct Slot {
    ComparisonRecord record;
    std::shared_ptr<PivotTrace> trace;
    GeneralLp lp;
  };
  std::vector<Slot> slots(entries.size());

  std::size_t workers = cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min(workers, entries.size());

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= entries.size()) return;
      const CanonicalLp can = canonicalize(entries[k].lp);
      const RunResult engine = run(can, cfg.engine);
      const OracleResult oracle = simplex_solve(can);
      Slot slot;
      slot.record = compare(engine, oracle, can, entries[k].id);
      slot.trace = engine.trace;
      slot.lp = entries[k].lp;
      if (needs_evidence(slot.record))
        slot.record.trace_ref = entries[k].id + ".trace.jsonl";
      slots[k] = std::move(slot);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  CampaignReport report;
  report.instances = entries.size();
  for (auto& slot : slots) {
    const auto& rec = slot.record;
    switch (rec.verdict) {
      case Verdict::Agree: ++report.agree; break;
      case Verdict::Disagree: ++report.disagree; break;
      case Verdict::EngineInconclusive: ++report.inconclusive; break;
    }
    if (!rec.bound_holds) ++report.bound_violations;
    if (rec.disagree_kind) ++report.disagree_by_kind[to_string(*rec.disagree_kind)];
    for (const auto e : rec.events) ++report.events_by_kind[to_string(e)];
    ++report.engine_status_counts[rec.engine_status];
    ++report.oracle_status_counts[rec.oracle_status];
    if (needs_evidence(rec)) report.counterexample_ids.push_back(rec.instance_id);
    report.records.push_back(rec);
  }

  if (cfg.out_dir) {
    std::filesystem::create_directories(*cfg.out_dir);
    {
      std::ofstream csv(*cfg.out_dir / "campaign.csv", std::ios::binary);
      csv << report.to_csv();
    }
    {
      std::ofstream js(*cfg.out_dir / "summary.json", std::ios::binary);
      js << report.to_json() << "\n";
    }
    const auto evidence = *cfg.out_dir / "counterexamples";
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (!needs_evidence(slots[k].record)) continue;
      std::filesystem::create_directories(evidence);
      const auto& id = slots[k].record.instance_id;
      {
        std::ofstream lp(evidence / (id + ".lp"), std::ios::binary);
        lp << emit_instance(slots[k].lp);
      }
      if (slots[k].trace) {
        std::ofstream tr(evidence / slots[k].record.trace_ref, std::ios::binary);
        tr << trace_to_jsonl(*slots[k].trace);
      }
    }
  }
  return report;
}

namespace {

GeneralLp drop_constraint(const GeneralLp& lp, std::size_t i) {
  GeneralLp out = lp;
  out.constraints.erase(out.constraints.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

GeneralLp drop_variable(const GeneralLp& lp, std::size_t j) {
  GeneralLp out = lp;
  out.objective.erase(out.objective.begin() + static_cast<std::ptrdiff_t>(j));
  for (auto& con : out.constraints)
    con.coeffs.erase(con.coeffs.begin() + static_cast<std::ptrdiff_t>(j));
  if (!out.is_free.empty()) {
    out.is_free.erase(out.is_free.begin() + static_cast<std::ptrdiff_t>(j));
    if (std::find(out.is_free.begin(), out.is_free.end(), true) == out.is_free.end())
      out.is_free.clear();
  }
  return out;
}

}  // namespace

GeneralLp shrink(const GeneralLp& lp,
                 const std::function<bool(const ComparisonRecord&)>& predicate,
                 const EngineConfig& cfg) {
  auto holds = [&](const GeneralLp& candidate) {
    if (candidate.num_vars() == 0) return false;
    return predicate(differential_run(candidate, cfg, "shrink"));
  };
  if (!holds(lp)) throw ModelError("shrink: predicate does not hold on the input");

  GeneralLp current = lp;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < current.num_constraints(); ++i) {
      const GeneralLp cand = drop_constraint(current, i);
      if (holds(cand)) {
        current = cand;
        changed = true;
        break;
      }
    }
    if (changed) continue;
    for (std::size_t j = 0; j < current.num_vars(); ++j) {
      if (current.num_vars() == 1) break;
      const GeneralLp cand = drop_variable(current, j);
      if (holds(cand)) {
        current = cand;
        changed = true;
        break;
      }
    }
    if (changed) continue;
    // zero out one coefficient at a time
    for (std::size_t i = 0; i < current.num_constraints() && !changed; ++i) {
      for (std::size_t j = 0; j < current.num_vars() && !changed; ++j) {
        if (current.constraints[i].coeffs[j].is_zero()) continue;
        GeneralLp cand = current;
        cand.constraints[i].coeffs[j] = Rational(0);
        if (holds(cand)) {
          current = cand;
          changed = true;
        }
      }
    }
    for (std::size_t j = 0; j < current.num_vars() && !changed; ++j) {
      if (current.objective[j].is_zero()) continue;
      GeneralLp cand = current;
      cand.objective[j] = Rational(0);
      if (holds(cand)) {
        current = cand;
        changed = true;
      }
    }
  }
  return current;
}

}  // namespace complp
