// complp: exact-rational complementary-pivot LP solver, simplex referee, and
// differential falsification harness.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "complp/eq_tableau.hpp"
#include "complp/generators.hpp"
#include "complp/harness.hpp"
#include "complp/lp_model.hpp"
#include "complp/pivot_engine.hpp"
#include "complp/simplex_oracle.hpp"

namespace {

using complp::Rational;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitEvidence = 2;
constexpr int kExitInconclusive = 3;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
  if (!path || *path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + *path + "'");
  out << text;
}

std::string human(const Rational& r) {
  if (r.den() == 1) return r.str();
  std::ostringstream out;
  out << r.str() << " (~" << r.approx() << ")";
  return out.str();
}

std::string vec_str(const std::vector<Rational>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i].str();
  }
  return out + ")";
}

ordered_json vec_json(const std::vector<Rational>& v) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : v) arr.push_back(r.str());
  return arr;
}

struct GlobalOpts {
  std::string theta = "1";
  std::string theta_rows;  // comma-separated, one entry per upper row
  std::size_t pivot_cap = 0;
  std::optional<std::string> trace_path;
  bool json = false;

  complp::EngineConfig engine() const {
    complp::EngineConfig cfg;
    cfg.theta = Rational::from_string(theta);
    if (!theta_rows.empty()) {
      std::vector<Rational> rows;
      std::istringstream in(theta_rows);
      std::string tok;
      while (std::getline(in, tok, ',')) rows.push_back(Rational::from_string(tok));
      cfg.theta_rows = std::move(rows);
    }
    cfg.pivot_cap = pivot_cap;
    return cfg;
  }
};

void maybe_write_trace(const GlobalOpts& opts, const complp::RunResult& result) {
  if (!opts.trace_path || !result.trace) return;
  std::ofstream out(*opts.trace_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace '" + *opts.trace_path + "'");
  out << complp::trace_to_jsonl(*result.trace);
}

ordered_json events_json(const std::vector<complp::FalsificationKind>& events) {
  ordered_json arr = ordered_json::array();
  for (const auto e : events) arr.push_back(complp::to_string(e));
  return arr;
}

int exit_code_for(const complp::RunResult& r) {
  if (r.status == complp::RunResult::Status::Falsified || !r.events.empty())
    return kExitEvidence;
  if (r.status == complp::RunResult::Status::Reduced ||
      r.status == complp::RunResult::Status::PivotCapExceeded)
    return kExitInconclusive;
  return kExitOk;
}

int cmd_solve(const GlobalOpts& opts, const std::string& file) {
  const auto lp = complp::parse_instance(read_input(file));
  const auto can = complp::canonicalize(lp);
  const auto result = complp::run(can, opts.engine());
  maybe_write_trace(opts, result);

  if (opts.json) {
    ordered_json j;
    j["status"] = complp::to_string(result.status);
    if (result.objective) {
      j["objective"] = complp::map_objective_back(can, *result.objective).str();
      j["objectiveCanonical"] = result.objective->str();
    }
    if (result.x) {
      j["x"] = vec_json(complp::map_solution_back(can, *result.x));
      j["xCanonical"] = vec_json(*result.x);
    }
    if (result.y) j["yCanonical"] = vec_json(*result.y);
    j["majorCount"] = result.major_count;
    j["minorCount"] = result.minor_count;
    j["totalPivots"] = result.total_pivots;
    j["boundHolds"] = result.major_count <= can.m() + can.n();
    j["events"] = events_json(result.events);
    if (result.falsified_kind) j["falsifiedKind"] = complp::to_string(*result.falsified_kind);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "status: " << complp::to_string(result.status) << "\n";
    if (result.objective)
      std::cout << "objective: " << human(complp::map_objective_back(can, *result.objective))
                << "\n";
    if (result.x)
      std::cout << "x: " << vec_str(complp::map_solution_back(can, *result.x)) << "\n";
    if (result.y) std::cout << "y (canonical dual): " << vec_str(*result.y) << "\n";
    std::cout << "pivots: " << result.total_pivots << " (MajorP " << result.major_count
              << ", MinorP " << result.minor_count << ")\n";
    std::cout << "bound majorCount <= m+n: "
              << (result.major_count <= can.m() + can.n() ? "holds" : "violated") << "\n";
    for (const auto e : result.events) std::cout << "event: " << complp::to_string(e) << "\n";
  }
  return exit_code_for(result);
}

int cmd_oracle(const GlobalOpts& opts, const std::string& file) {
  const auto lp = complp::parse_instance(read_input(file));
  const auto can = complp::canonicalize(lp);
  const auto result = complp::simplex_solve(can);
  const bool ok = complp::verify_certificate(can, result);

  if (opts.json) {
    ordered_json j;
    j["status"] = complp::to_string(result.status);
    j["certificateVerified"] = ok;
    j["pivots"] = result.pivot_count;
    if (result.optimal) {
      j["objective"] = complp::map_objective_back(can, result.optimal->objective).str();
      j["x"] = vec_json(complp::map_solution_back(can, result.optimal->x));
      j["yCanonical"] = vec_json(result.optimal->y);
    }
    if (result.infeasible) j["farkas"] = vec_json(result.infeasible->u);
    if (result.unbounded) {
      j["point"] = vec_json(result.unbounded->point);
      j["ray"] = vec_json(result.unbounded->ray);
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "status: " << complp::to_string(result.status) << "\n";
    std::cout << "certificate: " << (ok ? "verified" : "FAILED") << "\n";
    if (result.optimal) {
      std::cout << "objective: "
                << human(complp::map_objective_back(can, result.optimal->objective)) << "\n";
      std::cout << "x: " << vec_str(complp::map_solution_back(can, result.optimal->x)) << "\n";
      std::cout << "y (canonical dual): " << vec_str(result.optimal->y) << "\n";
    }
    if (result.infeasible) std::cout << "farkas u: " << vec_str(result.infeasible->u) << "\n";
    if (result.unbounded) {
      std::cout << "feasible point: " << vec_str(result.unbounded->point) << "\n";
      std::cout << "ray: " << vec_str(result.unbounded->ray) << "\n";
    }
    std::cout << "pivots: " << result.pivot_count << "\n";
  }
  return ok ? kExitOk : kExitUsage;
}

ordered_json record_json(const complp::ComparisonRecord& rec) {
  ordered_json j;
  j["id"] = rec.instance_id;
  j["m"] = rec.m;
  j["n"] = rec.n;
  j["engineStatus"] = rec.engine_status;
  j["oracleStatus"] = rec.oracle_status;
  j["verdict"] = complp::to_string(rec.verdict);
  if (rec.disagree_kind) j["disagreeKind"] = complp::to_string(*rec.disagree_kind);
  j["majorCount"] = rec.major_count;
  j["minorCount"] = rec.minor_count;
  j["totalPivots"] = rec.total_pivots;
  j["boundHolds"] = rec.bound_holds;
  if (rec.engine_objective) j["engineObjective"] = rec.engine_objective->str();
  if (rec.oracle_objective) j["oracleObjective"] = rec.oracle_objective->str();
  j["oracleCertificateOk"] = rec.oracle_certificate_ok;
  j["events"] = ordered_json::array();
  for (const auto e : rec.events) j["events"].push_back(complp::to_string(e));
  return j;
}

int record_exit(const complp::ComparisonRecord& rec) {
  if (rec.verdict == complp::Verdict::Disagree || !rec.events.empty()) return kExitEvidence;
  if (rec.verdict == complp::Verdict::EngineInconclusive) return kExitInconclusive;
  return kExitOk;
}

int cmd_diff(const GlobalOpts& opts, const std::string& file) {
  const auto lp = complp::parse_instance(read_input(file));
  const auto can = complp::canonicalize(lp);
  const auto engine = complp::run(can, opts.engine());
  maybe_write_trace(opts, engine);
  const auto oracle = complp::simplex_solve(can);
  const auto rec = complp::compare(engine, oracle, can, file == "-" ? "stdin" : file);
  if (opts.json) {
    std::cout << record_json(rec).dump(2) << "\n";
  } else {
    std::cout << "engine: " << rec.engine_status
              << (rec.engine_objective ? " objective " + rec.engine_objective->str() : "")
              << "\n";
    std::cout << "oracle: " << rec.oracle_status
              << (rec.oracle_objective ? " objective " + rec.oracle_objective->str() : "")
              << "\n";
    std::cout << "verdict: " << complp::to_string(rec.verdict);
    if (rec.disagree_kind) std::cout << " (" << complp::to_string(*rec.disagree_kind) << ")";
    std::cout << "\n";
    std::cout << "majorCount " << rec.major_count << " of m+n " << (rec.m + rec.n)
              << " -> bound " << (rec.bound_holds ? "holds" : "violated") << "\n";
    for (const auto e : rec.events) std::cout << "event: " << complp::to_string(e) << "\n";
  }
  return record_exit(rec);
}

int cmd_fuzz(const GlobalOpts& opts, std::size_t count, std::uint64_t seed, std::size_t max_m,
             std::size_t max_n, const std::optional<std::string>& out_dir,
             std::size_t workers) {
  complp::CampaignConfig cfg;
  cfg.count = count;
  cfg.seed_base = seed;
  cfg.max_m = max_m;
  cfg.max_n = max_n;
  cfg.engine = opts.engine();
  cfg.workers = workers;
  if (out_dir) cfg.out_dir = *out_dir;

  const auto report = complp::fuzz(cfg);
  if (opts.json) {
    std::cout << report.to_json() << "\n";
  } else {
    std::cout << "instances: " << report.instances << "\n"
              << "agree: " << report.agree << "\n"
              << "disagree: " << report.disagree << "\n"
              << "inconclusive: " << report.inconclusive << "\n"
              << "bound violations: " << report.bound_violations << "\n";
    for (const auto& [kind, cnt] : report.disagree_by_kind)
      std::cout << "disagree " << kind << ": " << cnt << "\n";
    for (const auto& [kind, cnt] : report.events_by_kind)
      std::cout << "event " << kind << ": " << cnt << "\n";
    if (out_dir) std::cout << "reports written to " << *out_dir << "\n";
  }
  if (report.disagree > 0 || !report.events_by_kind.empty()) return kExitEvidence;
  if (report.inconclusive > 0) return kExitInconclusive;
  return kExitOk;
}

int cmd_replay(const GlobalOpts& opts, const std::string& file) {
  const auto trace = complp::trace_from_jsonl(read_input(file));
  try {
    const auto states = complp::replay(trace);
    if (opts.json) {
      ordered_json j;
      j["steps"] = states.size();
      j["ok"] = true;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "replayed " << states.size() << " steps, all snapshots match\n";
    }
    return kExitOk;
  } catch (const complp::ReplayError& e) {
    std::cerr << "replay failed: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_check_reduction(const GlobalOpts& opts, const std::string& tableau_file,
                        const std::string& solution_file, const std::string& pair) {
  const auto t = complp::tableau_from_json(read_input(tableau_file));

  complp::EqSolution z;
  const auto sol_json = nlohmann::json::parse(read_input(solution_file));
  for (const auto& e : sol_json)
    z.z.push_back(e.is_string() ? Rational::from_string(e.get<std::string>())
                                : Rational(e.get<long>()));

  const auto comma = pair.find(',');
  if (comma == std::string::npos)
    throw std::runtime_error("--pair expects two 1-based column indices 'a,b'");
  const std::size_t col_a = std::stoul(pair.substr(0, comma));
  const std::size_t col_b = std::stoul(pair.substr(comma + 1));
  if (col_a == 0 || col_b == 0) throw std::runtime_error("--pair indices are 1-based");

  const auto pr = complp::reduce_to_pr(t, z, col_a - 1, col_b - 1);

  if (opts.json) {
    ordered_json j;
    ordered_json pj = ordered_json::array();
    for (std::size_t r = 0; r < pr.P.rows(); ++r) pj.push_back(vec_json(pr.P.row(r)));
    j["P"] = pj;
    j["r"] = vec_json(pr.r);
    ordered_json origins = ordered_json::array();
    for (const auto c : pr.column_origin) origins.push_back(c + 1);
    j["columnOrigin"] = origins;
    ordered_json moved = ordered_json::array();
    for (const auto c : pr.moved_columns) moved.push_back(c + 1);
    j["movedColumns"] = moved;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "P (columns from source columns";
    for (const auto c : pr.column_origin) std::cout << " " << (c + 1);
    std::cout << "):\n";
    for (std::size_t r = 0; r < pr.P.rows(); ++r)
      std::cout << "  " << vec_str(pr.P.row(r)) << "\n";
    std::cout << "r: " << vec_str(pr.r) << "\n";
  }
  return kExitOk;
}

int cmd_gen(const std::string& kind, unsigned d, long coeff_base, long rhs_base,
            std::uint64_t seed, std::size_t m, std::size_t n, long magnitude,
            unsigned density, bool rational_entries, const std::optional<std::string>& out) {
  complp::GeneratorSpec spec = complp::PaperIllustrationSpec{};
  if (kind == "klee-minty") spec = complp::KleeMintySpec{d, coeff_base, rhs_base};
  else if (kind == "beale") spec = complp::BealeSpec{};
  else if (kind == "paper") spec = complp::PaperIllustrationSpec{};
  else if (kind == "random") spec = complp::RandomSpec{seed, m, n, magnitude, density, rational_entries};
  else if (kind == "degenerate") spec = complp::DegenerateRandomSpec{seed, m, n, magnitude};
  else throw std::runtime_error("unknown generator '" + kind + "'");
  write_output(out, complp::emit_instance(complp::generate(spec)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact complementary-pivot LP solver with a simplex referee"};
  app.require_subcommand(1);

  GlobalOpts opts;
  app.add_option("--theta", opts.theta, "gap-row multiple added to each row at build time (p/q)");
  app.add_option("--theta-rows", opts.theta_rows,
                 "comma-separated per-row gap-row multiples, overrides --theta");
  app.add_option("--pivot-cap", opts.pivot_cap, "hard pivot cap (default 4(m+n))");
  app.add_option("--trace", opts.trace_path, "write the engine trace (JSON Lines) to this file");
  app.add_flag("--json", opts.json, "emit a single JSON document on stdout");

  std::string file;
  auto* solve = app.add_subcommand("solve", "run the complementary-pivot engine on an instance");
  solve->add_option("file", file, "instance file ('-' for stdin)")->required();

  auto* oracle = app.add_subcommand("oracle", "run the exact simplex referee on an instance");
  oracle->add_option("file", file, "instance file ('-' for stdin)")->required();

  auto* diff = app.add_subcommand("diff", "run both solvers and compare");
  diff->add_option("file", file, "instance file ('-' for stdin)")->required();

  std::size_t count = 100, max_m = 8, max_n = 8, workers = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> out_dir;
  auto* fuzz = app.add_subcommand("fuzz", "differential campaign over generated corpora");
  fuzz->add_option("--count", count, "number of instances");
  fuzz->add_option("--seed", seed, "campaign seed");
  fuzz->add_option("--max-m", max_m, "max constraint count");
  fuzz->add_option("--max-n", max_n, "max variable count");
  fuzz->add_option("--out", out_dir, "directory for CSV/JSON reports and evidence");
  fuzz->add_option("--workers", workers, "worker threads (default: hardware)");

  std::string gen_kind;
  unsigned km_d = 3;
  long km_coeff = 2, km_rhs = 5, magnitude = 6;
  std::size_t gm = 3, gn = 3;
  unsigned density = 100;
  bool rational_entries = false;
  std::uint64_t gen_seed = 0;
  std::optional<std::string> gen_out;
  auto* gen = app.add_subcommand("gen", "write a generated instance in the text format");
  gen->add_option("kind", gen_kind, "klee-minty | beale | paper | random | degenerate")
      ->required();
  gen->add_option("--d", km_d, "klee-minty dimension");
  gen->add_option("--coeff-base", km_coeff, "klee-minty coefficient base");
  gen->add_option("--rhs-base", km_rhs, "klee-minty right-hand-side base");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--m", gm, "constraints");
  gen->add_option("--n", gn, "variables");
  gen->add_option("--magnitude", magnitude, "coefficient magnitude");
  gen->add_option("--density", density, "nonzero density percent");
  gen->add_flag("--rational", rational_entries, "rational entries with denominators up to 10");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  auto* replay = app.add_subcommand("replay", "re-run a trace and check every snapshot");
  replay->add_option("file", file, "trace file ('-' for stdin)")->required();

  std::string tableau_file, solution_file, pair;
  auto* checkred = app.add_subcommand("check-reduction",
                                      "build [P r] from a tableau and a solution");
  checkred->add_option("--tableau", tableau_file, "tableau JSON file")->required();
  checkred->add_option("--solution", solution_file, "solution JSON array of rationals")
      ->required();
  checkred->add_option("--pair", pair, "designated columns, 1-based 'a,b'")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(opts, file);
    if (oracle->parsed()) return cmd_oracle(opts, file);
    if (diff->parsed()) return cmd_diff(opts, file);
    if (fuzz->parsed())
      return cmd_fuzz(opts, count, seed, max_m, max_n, out_dir, workers);
    if (gen->parsed())
      return cmd_gen(gen_kind, km_d, km_coeff, km_rhs, gen_seed, gm, gn, magnitude, density,
                     rational_entries, gen_out);
    if (replay->parsed()) return cmd_replay(opts, file);
    if (checkred->parsed())
      return cmd_check_reduction(opts, tableau_file, solution_file, pair);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
