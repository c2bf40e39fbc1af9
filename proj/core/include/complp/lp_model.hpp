#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "complp/matrix.hpp"
#include "complp/rational.hpp"

namespace complp {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", col " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

enum class Sense { Maximize, Minimize };
enum class Relation { LessEq, Equal, GreaterEq };

struct Constraint {
  std::vector<Rational> coeffs;
  Relation rel = Relation::LessEq;
  Rational rhs;

  bool operator==(const Constraint&) const = default;
};

/// A linear program as written: either sense, any relation per row,
/// nonnegative or free variables.
struct GeneralLp {
  Sense sense = Sense::Maximize;
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;
  std::vector<bool> is_free;  // per variable; empty means all nonnegative

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_constraints() const { return constraints.size(); }

  /// Throws ModelError on ragged rows or a free-list of the wrong length.
  void validate() const;

  bool operator==(const GeneralLp&) const = default;
};

/// Where a canonical variable came from, for mapping solutions back.
struct VarOrigin {
  std::size_t positive_part = 0;                  // canonical column of x+
  std::optional<std::size_t> negative_part;       // canonical column of x-, for free vars
};

/// maximize c.x subject to Ax <= b, x >= 0.
struct CanonicalLp {
  Matrix A;
  std::vector<Rational> b;
  std::vector<Rational> c;

  // provenance back to the GeneralLp this was derived from
  Sense original_sense = Sense::Maximize;
  std::vector<VarOrigin> var_origin;     // one per original variable
  std::vector<std::size_t> row_origin;   // canonical row -> original constraint index

  std::size_t m() const { return b.size(); }
  std::size_t n() const { return c.size(); }
};

/// Rewrites any GeneralLp as an equivalent max / <= / x>=0 instance:
/// min flips the objective, >= rows are negated, = rows split into two
/// inequalities, free variables split as x = x+ - x-.
CanonicalLp canonicalize(const GeneralLp& lp);

/// Maps a canonical solution vector back onto the original variables.
std::vector<Rational> map_solution_back(const CanonicalLp& can, const std::vector<Rational>& x);

/// Canonical objective value -> original objective value (sign flip for min).
Rational map_objective_back(const CanonicalLp& can, const Rational& objective);

/// Line-oriented instance format:
///   sense: max|min
///   vars: n
///   c: v1 v2 ... vn
///   a1 a2 ... an <=|=|>= b     (one line per constraint)
///   free: i j k                (optional, 1-based indices)
/// Numbers are integers or p/q. '#' starts a comment.
GeneralLp parse_instance(std::string_view text);

/// Deterministic rendering; parse_instance(emit_instance(lp)) == lp.
std::string emit_instance(const GeneralLp& lp);

}  // namespace complp
