#include "complp/pivot_engine.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

namespace complp {

using ordered_json = nlohmann::ordered_json;

const char* to_string(FalsificationKind k) {
  switch (k) {
    case FalsificationKind::RepeatSelection: return "RepeatSelection";
    case FalsificationKind::IterationBoundViolated: return "IterationBoundViolated";
    case FalsificationKind::UnderdeterminedStep: return "UnderdeterminedStep";
  }
  return "?";
}

const char* to_string(SelectionClass c) {
  switch (c) {
    case SelectionClass::Fresh: return "Fresh";
    case SelectionClass::Reversal: return "Reversal";
    case SelectionClass::Repeat: return "Repeat";
  }
  return "?";
}

const char* to_string(RunResult::Status s) {
  switch (s) {
    case RunResult::Status::Solved: return "Solved";
    case RunResult::Status::NoSolution: return "NoSolution";
    case RunResult::Status::Reduced: return "Reduced";
    case RunResult::Status::Falsified: return "Falsified";
    case RunResult::Status::PivotCapExceeded: return "PivotCapExceeded";
  }
  return "?";
}

SelectionClass SelectionHistory::classify(std::size_t col, const EqDims& dims) const {
  if (std::find(selected_.begin(), selected_.end(), col) != selected_.end())
    return SelectionClass::Repeat;
  const std::size_t partner = complement(col, dims);
  if (std::find(selected_.begin(), selected_.end(), partner) != selected_.end())
    return SelectionClass::Reversal;
  return SelectionClass::Fresh;
}

std::optional<std::size_t> majorp_select(const EqTableau& t) {
  const EqDims& d = t.dims();
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < d.num_cols(); ++j) {
    const Rational& g = t.gap_entry(j);
    if (g.sign() <= 0) continue;
    if (!best || g > t.gap_entry(*best)) best = j;  // strict: ties keep the smaller index
  }
  return best;
}

MinorSelectResult minorp_select(const EqTableau& t, std::vector<bool>& considered) {
  const EqDims& d = t.dims();
  if (considered.size() != d.upper()) considered.assign(d.upper(), false);

  bool any_negative = false;
  for (std::size_t r = 0; r < d.upper(); ++r)
    if (t.q(r).sign() < 0) any_negative = true;
  if (!any_negative) return NoNegativeQ{};

  while (true) {
    std::optional<std::size_t> pick;
    for (std::size_t r = 0; r < d.upper(); ++r) {
      if (considered[r] || t.q(r).sign() >= 0) continue;
      if (!pick || t.q(r).abs() < t.q(*pick).abs()) pick = r;  // |q| minimal, then row index
    }
    if (!pick) return AllBottomZero{};
    const auto basic = t.basic_col_of_row(*pick);
    if (!basic) throw EngineError("minorp_select: candidate row has no basic column");
    const std::size_t c = complement(*basic, d);
    if (!t.gap_entry(c).is_zero()) return MinorSelection{*pick, c};
    considered[*pick] = true;
  }
}

DegenerateFixResult degenerate_fix(EqTableau& t, const std::vector<bool>& considered) {
  const EqDims& d = t.dims();
  for (std::size_t k = 0; k < d.num_cols(); ++k) {
    if (t.gap_entry(k).sign() <= 0) continue;
    const std::size_t row = k < d.upper() ? k : k - d.upper();
    if (t.q(row).sign() <= 0) continue;
    // eps keeps every positive gap entry positive
    std::optional<Rational> bound;
    for (std::size_t j = 0; j < d.num_cols(); ++j) {
      if (t.gap_entry(j).sign() > 0 && t.entry(row, j).sign() < 0) {
        const Rational ratio = t.gap_entry(j) / t.entry(row, j).abs();
        if (!bound || ratio < *bound) bound = ratio;
      }
    }
    const Rational eps = bound ? *bound / Rational(2) : Rational(1);
    t.add_row_multiple(d.gap_row(), row, eps);
    return FixApplied{row, eps};
  }
  // nothing to add: name the first blocked candidate pair for elimination
  std::optional<std::size_t> pick;
  for (std::size_t r = 0; r < d.upper(); ++r) {
    if (t.q(r).sign() >= 0) continue;
    if (!pick || t.q(r).abs() < t.q(*pick).abs()) pick = r;
  }
  if (!pick) throw EngineError("degenerate_fix: no negative rows to reduce");
  (void)considered;
  const auto basic = t.basic_col_of_row(*pick);
  if (!basic) throw EngineError("degenerate_fix: blocked row has no basic column");
  return ReduceProblem{*pick, *basic, complement(*basic, t.dims())};
}

namespace {

Matrix sparse_snapshot(const EqTableau& t) {
  // gap row in row 0, right-hand sides in row 1
  const EqDims& d = t.dims();
  Matrix s(2, d.rhs_col() + 1);
  for (std::size_t c = 0; c <= d.rhs_col(); ++c) s.at(0, c) = t.gap_entry(c);
  for (std::size_t r = 0; r < d.rows(); ++r) s.at(1, r) = t.q(r);
  return s;
}

std::optional<Matrix> make_snapshot(const EqTableau& t, EngineConfig::SnapshotPolicy p) {
  switch (p) {
    case EngineConfig::SnapshotPolicy::Full: return t.entries();
    case EngineConfig::SnapshotPolicy::Sparse: return sparse_snapshot(t);
    case EngineConfig::SnapshotPolicy::None: return std::nullopt;
  }
  return std::nullopt;
}

/// Child system obtained by deleting one upper row and one complementary
/// column pair; the remaining columns renumber so that the pairing involution
/// is preserved. col_map[child col] = parent col.
struct Reduction {
  EqTableau child;
  std::vector<std::size_t> col_map;
};

Reduction reduce_system(const EqTableau& t, std::size_t drop_row, std::size_t col_a,
                        std::size_t col_b) {
  const EqDims& d = t.dims();
  const std::size_t low = std::min(col_a, col_b);
  const std::size_t high = std::max(col_a, col_b);
  if (complement(low, d) != high)
    throw EngineError("reduce_system: columns are not a complement pair");

  const EqDims cd{d.upper() - 1, 0};
  std::vector<std::size_t> col_map;
  col_map.reserve(cd.num_cols());
  for (std::size_t c = 0; c < d.upper(); ++c)
    if (c != low) col_map.push_back(c);
  for (std::size_t c = d.upper(); c < d.num_cols(); ++c)
    if (c != high) col_map.push_back(c);

  Matrix entries(cd.rows(), cd.rhs_col() + 1);
  std::vector<std::optional<std::size_t>> basis(cd.upper());
  std::size_t cr = 0;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    if (r == drop_row) continue;
    for (std::size_t cc = 0; cc < cd.num_cols(); ++cc)
      entries.at(cr, cc) = t.entry(r, col_map[cc]);
    entries.at(cr, cd.rhs_col()) = t.q(r);
    if (r < d.upper()) {
      const auto b = t.basic_col_of_row(r);
      if (b) {
        const auto it = std::find(col_map.begin(), col_map.end(), *b);
        if (it != col_map.end())
          basis[cr] = static_cast<std::size_t>(it - col_map.begin());
      }
    }
    ++cr;
  }
  return Reduction{EqTableau(cd, std::move(entries), std::move(basis)), std::move(col_map)};
}

class Engine {
 public:
  Engine(const CanonicalLp& lp, const EngineConfig& cfg)
      : lp_(lp),
        cfg_(cfg),
        dims_{lp.m(), lp.n()},
        t0_(EqTableau::build(lp, Rational(0))) {
    EqTableau initial = cfg.theta_rows ? EqTableau::build(lp, *cfg.theta_rows)
                                       : EqTableau::build(lp, cfg.theta);
    trace_ = std::make_shared<PivotTrace>(PivotTrace{lp, cfg, initial, {}});
    cap_ = cfg.effective_cap(dims_);
    max_depth_ = cfg.max_reduction_depth ? cfg.max_reduction_depth : dims_.upper();
  }

  RunResult run() {
    EqTableau t = trace_->initial;
    std::vector<std::size_t> col_map(t.dims().num_cols());
    for (std::size_t c = 0; c < col_map.size(); ++c) col_map[c] = c;
    loop(t, col_map, 0);
    result_.trace = trace_;
    result_.total_pivots = result_.major_count + result_.minor_count;
    return std::move(result_);
  }

 private:
  void record(const EqTableau& t, std::size_t depth, TraceOp op, std::string rationale) {
    TraceStep step;
    step.index = trace_->steps.size();
    step.depth = depth;
    step.op = std::move(op);
    step.snapshot = make_snapshot(t, cfg_.snapshots);
    step.rationale = std::move(rationale);
    trace_->steps.push_back(std::move(step));
  }

  void note_event(FalsificationKind k) {
    if (std::find(result_.events.begin(), result_.events.end(), k) == result_.events.end())
      result_.events.push_back(k);
  }

  std::size_t pivots() const { return result_.major_count + result_.minor_count; }

  /// Lifts a basic solution of the (possibly reduced) system to the root
  /// column space and verifies it against the theta=0 construction.
  bool try_accept_solution(const EqTableau& t, const std::vector<std::size_t>& col_map) {
    const auto sol = t.basic_solution();
    if (!sol) return false;
    EqSolution root;
    root.z.assign(dims_.num_cols(), Rational(0));
    for (std::size_t c = 0; c < col_map.size(); ++c) root.z[col_map[c]] = sol->z[c];
    const auto rep = verify_eq_solution(lp_, t0_, root);
    if (!rep.all_ok()) return false;
    result_.status = RunResult::Status::Solved;
    result_.solution = root;
    result_.x = root.extract_x(dims_);
    result_.y = root.extract_y(dims_);
    result_.objective = rep.primal_objective;
    return true;
  }

  bool solved_state(const EqTableau& t) const {
    if (!t.gap_q().is_zero()) return false;
    for (std::size_t r = 0; r < t.dims().upper(); ++r)
      if (t.q(r).sign() < 0) return false;
    return t.basis_complete() && t.basis_complementary();
  }

  void loop(EqTableau& t, const std::vector<std::size_t>& col_map, std::size_t depth) {
    const EqDims d = t.dims();
    SelectionHistory history;
    std::vector<bool> considered(d.upper(), false);

    while (true) {
      if (solved_state(t)) {
        if (try_accept_solution(t, col_map)) return;
        // at depth 0 row operations preserve the solution set, so a solved
        // state that fails root verification is only reachable under a
        // reduction, whose equivalence the appendix leaves unproven
        if (depth == 0)
          throw EngineError("solved state failed theta=0 verification at depth 0");
        result_.status = RunResult::Status::Reduced;
        return;
      }
      if (pivots() >= cap_) {
        result_.status = RunResult::Status::PivotCapExceeded;
        return;
      }

      if (!t.gap_q().is_zero()) {
        if (t.gap_q().sign() < 0) {
          t.scale_row(d.gap_row(), Rational(-1));
          record(t, depth, SignFlipOp{}, "gap-row right-hand side was negative");
        }
        const auto jstar = majorp_select(t);
        if (!jstar) {
          // no positive gap entry with positive gap q: the system is
          // unsatisfiable over nonnegative variables
          result_.status = RunResult::Status::NoSolution;
          return;
        }
        const SelectionClass cls = history.classify(*jstar, d);
        if (cls == SelectionClass::Repeat) {
          note_event(FalsificationKind::RepeatSelection);
          finish_falsified(FalsificationKind::RepeatSelection, depth);
          return;
        }
        if (cls == SelectionClass::Reversal) {
          // a reversal attempt stops the run: accept the current basic
          // solution if it verifies, otherwise report unsolvable
          if (try_accept_solution(t, col_map)) return;
          result_.status = RunResult::Status::NoSolution;
          return;
        }
        history.record(*jstar);

        auto prow = t.row_of_basic_col(complement(*jstar, d));
        if (!prow) {
          note_event(FalsificationKind::UnderdeterminedStep);
          for (std::size_t r = 0; r < d.upper(); ++r)
            if (t.entry(r, *jstar).sign() > 0) {
              prow = r;
              break;
            }
          if (!prow) {
            finish_falsified(FalsificationKind::UnderdeterminedStep, depth);
            return;
          }
        }
        if (t.entry(*prow, *jstar).is_zero()) {
          // gap-row repair: the selected column has a positive gap entry,
          // so adding the gap row to the pivot row makes the pivot possible
          t.add_row_multiple(*prow, d.gap_row(), Rational(1));
          record(t, depth, ThetaRepairOp{*prow}, "zero pivot entry in the selected column");
        }
        t.pivot(*prow, *jstar);
        ++result_.major_count;
        record(t, depth, PivotOp{Phase::MajorP, *prow, *jstar, cls},
               "largest positive gap entry, smallest index");
        std::fill(considered.begin(), considered.end(), false);
        if (result_.major_count > dims_.upper())
          note_event(FalsificationKind::IterationBoundViolated);
        continue;
      }

      // gap q == 0 and some upper q is negative
      const auto sel = minorp_select(t, considered);
      if (std::holds_alternative<NoNegativeQ>(sel)) {
        // only reachable if the basis lost completeness or complementarity
        note_event(FalsificationKind::UnderdeterminedStep);
        finish_falsified(FalsificationKind::UnderdeterminedStep, depth);
        return;
      }
      if (const auto* pick = std::get_if<MinorSelection>(&sel)) {
        if (t.entry(pick->row, pick->col).is_zero()) {
          // gap q is zero here, so the repair leaves the row's q unchanged
          t.add_row_multiple(pick->row, d.gap_row(), Rational(1));
          record(t, depth, ThetaRepairOp{pick->row}, "zero pivot entry in the complement column");
        }
        t.pivot(pick->row, pick->col);
        ++result_.minor_count;
        record(t, depth, PivotOp{Phase::MinorP, pick->row, pick->col, SelectionClass::Fresh},
               "negative right-hand side, minimal |q|");
        std::fill(considered.begin(), considered.end(), false);
        continue;
      }

      // AllBottomZero: repair the gap row or descend to a reduced system
      const auto fix = degenerate_fix(t, considered);
      if (const auto* applied = std::get_if<FixApplied>(&fix)) {
        record(t, depth, DegenerateFixOp{applied->row, applied->eps},
               "no pivotable negative row; gap row amended");
        continue;
      }
      const auto& red = std::get<ReduceProblem>(fix);
      if (depth + 1 > max_depth_) {
        result_.status = RunResult::Status::Reduced;
        return;
      }
      auto sub = reduce_system(t, red.row, red.col_a, red.col_b);
      record(sub.child, depth + 1, ReduceOp{red.row, red.col_a, red.col_b},
             "no gap-row amendment available; eliminating a pair");
      std::vector<std::size_t> child_map(sub.col_map.size());
      for (std::size_t c = 0; c < sub.col_map.size(); ++c)
        child_map[c] = col_map[sub.col_map[c]];
      loop(sub.child, child_map, depth + 1);
      // a verified solution or a cap overrun propagates as-is; everything
      // else surfaces as Reduced because the shrunken system's equivalence
      // is not established
      if (result_.status == RunResult::Status::Solved ||
          result_.status == RunResult::Status::PivotCapExceeded)
        return;
      result_.status = RunResult::Status::Reduced;
      return;
    }
  }

  void finish_falsified(FalsificationKind kind, std::size_t depth) {
    if (depth == 0) {
      result_.status = RunResult::Status::Falsified;
      result_.falsified_kind = kind;
    } else {
      result_.status = RunResult::Status::Reduced;
    }
  }

  const CanonicalLp& lp_;
  EngineConfig cfg_;
  EqDims dims_;
  EqTableau t0_;
  std::shared_ptr<PivotTrace> trace_;
  std::size_t cap_ = 0;
  std::size_t max_depth_ = 0;
  RunResult result_;
};

}  // namespace

RunResult run(const CanonicalLp& lp, const EngineConfig& cfg) {
  return Engine(lp, cfg).run();
}

// --- serialization -----------------------------------------------------------

namespace {

ordered_json rationals_to_json(const std::vector<Rational>& v) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : v) arr.push_back(r.str());
  return arr;
}

std::vector<Rational> rationals_from_json(const nlohmann::json& j) {
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(Rational::from_string(e.get<std::string>()));
  return out;
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(rationals_to_json(m.row(r)));
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.at(0).size() : 0;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto vals = rationals_from_json(j.at(r));
    if (vals.size() != cols) throw ReplayError("ragged matrix in trace");
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = vals[c];
  }
  return m;
}

ordered_json config_to_json(const EngineConfig& cfg) {
  ordered_json j;
  j["theta"] = cfg.theta.str();
  if (cfg.theta_rows) j["theta_rows"] = rationals_to_json(*cfg.theta_rows);
  j["pivot_cap"] = cfg.pivot_cap;
  j["snapshots"] = cfg.snapshots == EngineConfig::SnapshotPolicy::Full     ? "full"
                   : cfg.snapshots == EngineConfig::SnapshotPolicy::Sparse ? "sparse"
                                                                           : "none";
  j["max_reduction_depth"] = cfg.max_reduction_depth;
  return j;
}

EngineConfig config_from_json(const nlohmann::json& j) {
  EngineConfig cfg;
  cfg.theta = Rational::from_string(j.at("theta").get<std::string>());
  if (j.contains("theta_rows")) cfg.theta_rows = rationals_from_json(j.at("theta_rows"));
  cfg.pivot_cap = j.at("pivot_cap").get<std::size_t>();
  const std::string s = j.at("snapshots").get<std::string>();
  cfg.snapshots = s == "full"     ? EngineConfig::SnapshotPolicy::Full
                  : s == "sparse" ? EngineConfig::SnapshotPolicy::Sparse
                                  : EngineConfig::SnapshotPolicy::None;
  cfg.max_reduction_depth = j.at("max_reduction_depth").get<std::size_t>();
  return cfg;
}

ordered_json op_to_json(const TraceOp& op) {
  ordered_json j;
  if (const auto* p = std::get_if<PivotOp>(&op)) {
    j["op"] = "pivot";
    j["phase"] = p->phase == Phase::MajorP ? "MajorP" : "MinorP";
    j["pivotRow"] = p->row;
    j["pivotCol"] = p->col;
    j["classification"] = to_string(p->classification);
  } else if (std::holds_alternative<SignFlipOp>(op)) {
    j["op"] = "sign_flip";
  } else if (const auto* r = std::get_if<ThetaRepairOp>(&op)) {
    j["op"] = "theta_repair";
    j["row"] = r->row;
  } else if (const auto* f = std::get_if<DegenerateFixOp>(&op)) {
    j["op"] = "degenerate_fix";
    j["row"] = f->row;
    j["eps"] = f->eps.str();
  } else if (const auto* d = std::get_if<ReduceOp>(&op)) {
    j["op"] = "reduce";
    j["row"] = d->row;
    j["col_a"] = d->col_a;
    j["col_b"] = d->col_b;
  }
  return j;
}

TraceOp op_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("op").get<std::string>();
  if (kind == "pivot") {
    PivotOp p;
    p.phase = j.at("phase").get<std::string>() == "MajorP" ? Phase::MajorP : Phase::MinorP;
    p.row = j.at("pivotRow").get<std::size_t>();
    p.col = j.at("pivotCol").get<std::size_t>();
    const std::string c = j.at("classification").get<std::string>();
    p.classification = c == "Fresh"      ? SelectionClass::Fresh
                       : c == "Reversal" ? SelectionClass::Reversal
                                         : SelectionClass::Repeat;
    return p;
  }
  if (kind == "sign_flip") return SignFlipOp{};
  if (kind == "theta_repair") return ThetaRepairOp{j.at("row").get<std::size_t>()};
  if (kind == "degenerate_fix")
    return DegenerateFixOp{j.at("row").get<std::size_t>(),
                           Rational::from_string(j.at("eps").get<std::string>())};
  if (kind == "reduce")
    return ReduceOp{j.at("row").get<std::size_t>(), j.at("col_a").get<std::size_t>(),
                    j.at("col_b").get<std::size_t>()};
  throw ReplayError("unknown trace op '" + kind + "'");
}

}  // namespace

std::string trace_to_jsonl(const PivotTrace& trace) {
  std::ostringstream out;
  ordered_json header;
  header["type"] = "header";
  header["instance"]["m"] = trace.instance.m();
  header["instance"]["n"] = trace.instance.n();
  header["instance"]["A"] = matrix_to_json(trace.instance.A);
  header["instance"]["b"] = rationals_to_json(trace.instance.b);
  header["instance"]["c"] = rationals_to_json(trace.instance.c);
  header["config"] = config_to_json(trace.config);
  header["initial"] = nlohmann::json::parse(tableau_to_json(trace.initial));
  out << header.dump() << "\n";
  for (const auto& step : trace.steps) {
    ordered_json j;
    j["step"] = step.index;
    j["depth"] = step.depth;
    j.update(op_to_json(step.op));
    if (!step.rationale.empty()) j["rationale"] = step.rationale;
    if (step.snapshot) j["snapshot"] = matrix_to_json(*step.snapshot);
    out << j.dump() << "\n";
  }
  return out.str();
}

PivotTrace trace_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ReplayError("empty trace");
  const auto header = nlohmann::json::parse(line);
  if (header.value("type", "") != "header") throw ReplayError("missing trace header");

  CanonicalLp lp;
  const auto& inst = header.at("instance");
  lp.A = matrix_from_json(inst.at("A"));
  lp.b = rationals_from_json(inst.at("b"));
  lp.c = rationals_from_json(inst.at("c"));
  lp.var_origin.resize(lp.n());
  for (std::size_t j = 0; j < lp.n(); ++j) lp.var_origin[j].positive_part = j;
  lp.row_origin.resize(lp.m());
  for (std::size_t i = 0; i < lp.m(); ++i) lp.row_origin[i] = i;

  PivotTrace trace{lp, config_from_json(header.at("config")),
                   tableau_from_json(header.at("initial").dump()), {}};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    TraceStep step;
    step.index = j.at("step").get<std::size_t>();
    step.depth = j.value("depth", std::size_t{0});
    step.op = op_from_json(j);
    step.rationale = j.value("rationale", "");
    if (j.contains("snapshot")) step.snapshot = matrix_from_json(j.at("snapshot"));
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

std::vector<EqTableau> replay(const PivotTrace& trace) {
  std::vector<EqTableau> states;
  EqTableau t = trace.initial;

  for (const auto& step : trace.steps) {
    if (const auto* p = std::get_if<PivotOp>(&step.op)) {
      t.pivot(p->row, p->col);
    } else if (std::holds_alternative<SignFlipOp>(step.op)) {
      t.scale_row(t.dims().gap_row(), Rational(-1));
    } else if (const auto* r = std::get_if<ThetaRepairOp>(&step.op)) {
      t.add_row_multiple(r->row, t.dims().gap_row(), Rational(1));
    } else if (const auto* f = std::get_if<DegenerateFixOp>(&step.op)) {
      t.add_row_multiple(t.dims().gap_row(), f->row, f->eps);
    } else if (const auto* d = std::get_if<ReduceOp>(&step.op)) {
      t = reduce_system(t, d->row, d->col_a, d->col_b).child;
    }
    if (step.snapshot) {
      const bool full = trace.config.snapshots == EngineConfig::SnapshotPolicy::Full;
      const Matrix expect = full ? t.entries() : sparse_snapshot(t);
      if (!(expect == *step.snapshot))
        throw ReplayError("snapshot mismatch at step " + std::to_string(step.index));
    }
    states.push_back(t);
  }
  return states;
}

}  // namespace complp
