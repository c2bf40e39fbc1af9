#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "complp/eq_tableau.hpp"
#include "complp/lp_model.hpp"

namespace complp {

class EngineError : public std::runtime_error {
 public:
  explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

enum class Phase { MajorP, MinorP };

enum class SelectionClass { Fresh, Reversal, Repeat };

/// Machine-checked run artifacts that bear on the published complexity claims.
enum class FalsificationKind {
  RepeatSelection,        // a MajorP selection repeated (claimed impossible)
  IterationBoundViolated, // more than m+n MajorP selections
  UnderdeterminedStep,    // the rules define no next step from this state
};

const char* to_string(FalsificationKind k);
const char* to_string(SelectionClass c);

/// Ordered log of MajorP selections, with the classification rule: a new
/// candidate is a Repeat if it was selected before, a Reversal if its
/// complement was, otherwise Fresh.
class SelectionHistory {
 public:
  SelectionClass classify(std::size_t col, const EqDims& dims) const;
  void record(std::size_t col) { selected_.push_back(col); }
  const std::vector<std::size_t>& selected() const { return selected_; }

 private:
  std::vector<std::size_t> selected_;
};

struct EngineConfig {
  Rational theta = Rational(1);
  std::optional<std::vector<Rational>> theta_rows;  // overrides theta when set
  std::size_t pivot_cap = 0;                        // 0 means 4(m+n)
  enum class SnapshotPolicy { Full, Sparse, None } snapshots = SnapshotPolicy::Full;
  std::size_t max_reduction_depth = 0;              // 0 means m+n

  /// The configured cap, floored at m+n; defaults to 4(m+n).
  std::size_t effective_cap(const EqDims& d) const {
    const std::size_t cap = pivot_cap ? pivot_cap : 4 * d.upper();
    return std::max(cap, d.upper());
  }
};

// --- trace -----------------------------------------------------------------

struct PivotOp {
  Phase phase;
  std::size_t row, col;
  SelectionClass classification;  // meaningful for MajorP
};
struct SignFlipOp {};                                   // gap row scaled by -1
struct ThetaRepairOp { std::size_t row; };              // row += gap row
struct DegenerateFixOp { std::size_t row; Rational eps; };  // gap row += eps*row
struct ReduceOp { std::size_t row, col_a, col_b; };     // descend to child system

using TraceOp = std::variant<PivotOp, SignFlipOp, ThetaRepairOp, DegenerateFixOp, ReduceOp>;

struct TraceStep {
  std::size_t index = 0;
  std::size_t depth = 0;  // reduction recursion depth
  TraceOp op;
  /// Full tableau snapshot, or gap row + rhs column under the Sparse policy.
  std::optional<Matrix> snapshot;
  std::string rationale;
};

/// Replayable log: applying the recorded operations to the initial tableau
/// reproduces every snapshot exactly.
struct PivotTrace {
  CanonicalLp instance;
  EngineConfig config;
  EqTableau initial;
  std::vector<TraceStep> steps;
};

// --- results ---------------------------------------------------------------

struct RunResult {
  enum class Status { Solved, NoSolution, Reduced, Falsified, PivotCapExceeded };

  Status status = Status::PivotCapExceeded;

  // Solved payload, verified against the theta=0 system before being set
  std::optional<EqSolution> solution;
  std::optional<std::vector<Rational>> x, y;
  std::optional<Rational> objective;

  std::optional<FalsificationKind> falsified_kind;  // when status == Falsified
  std::vector<FalsificationKind> events;            // all events, incl. non-terminal

  std::size_t major_count = 0;
  std::size_t minor_count = 0;
  std::size_t total_pivots = 0;

  std::shared_ptr<PivotTrace> trace;
  std::shared_ptr<RunResult> child;  // set when a reduction was attempted

  bool bound_holds(const EqDims& d) const { return major_count <= d.upper(); }
};

const char* to_string(RunResult::Status s);

// --- selection rules (exposed for tests and inspection) ---------------------

/// Smallest column index attaining the maximum positive gap-row entry;
/// nullopt when the gap row has no positive structural entry.
std::optional<std::size_t> majorp_select(const EqTableau& t);

struct MinorSelection { std::size_t row, col; };
struct AllBottomZero {};   // every candidate's complement column has a zero gap entry
struct NoNegativeQ {};
using MinorSelectResult = std::variant<MinorSelection, AllBottomZero, NoNegativeQ>;

/// Candidates are upper rows with q < 0 not yet considered, ordered by
/// |q| then row index; a candidate is accepted when the gap-row entry of
/// the complement of its basic column is nonzero. Rejected candidates are
/// added to `considered`.
MinorSelectResult minorp_select(const EqTableau& t, std::vector<bool>& considered);

struct FixApplied { std::size_t row; Rational eps; };
struct ReduceProblem { std::size_t row, col_a, col_b; };
using DegenerateFixResult = std::variant<FixApplied, ReduceProblem>;

/// The gap-row repair for the all-zero case: adds a suitably small copy of
/// an eligible row to the gap row (no positive gap entry changes sign), or
/// names the row/column pair to eliminate when no eligible row exists.
DegenerateFixResult degenerate_fix(EqTableau& t, const std::vector<bool>& considered);

/// Runs the complementary-pivot algorithm on a canonical LP.
RunResult run(const CanonicalLp& lp, const EngineConfig& cfg = {});

// --- trace serialization and replay -----------------------------------------

/// JSON Lines: header line (instance, config, initial tableau), then one
/// line per step.
std::string trace_to_jsonl(const PivotTrace& trace);
PivotTrace trace_from_jsonl(const std::string& text);

class ReplayError : public std::runtime_error {
 public:
  explicit ReplayError(const std::string& what) : std::runtime_error(what) {}
};

/// Reapplies the recorded operations from the initial tableau, checking
/// every snapshot; returns the tableau after each step. Throws ReplayError
/// at the first divergence.
std::vector<EqTableau> replay(const PivotTrace& trace);

}  // namespace complp
