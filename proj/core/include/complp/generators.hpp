#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "complp/lp_model.hpp"

namespace complp {

class GeneratorError : public std::runtime_error {
 public:
  explicit GeneratorError(const std::string& what) : std::runtime_error(what) {}
};

/// Klee-Minty cube in d dimensions:
///   max sum_j base^(d-j) x_j
///   s.t. 2 * sum_{j<i} base^(i-j-1)... using the standard coefficient-2
/// family with right-hand sides rhs_base^i; optimum rhs_base^d. The bases
/// are parameters so other variants of the family can be produced.
struct KleeMintySpec {
  unsigned d = 1;
  long coeff_base = 2;
  long rhs_base = 5;
};

/// The classical 3-constraint, 4-variable instance on which the naive
/// most-negative-reduced-cost rule cycles without anti-cycling.
struct BealeSpec {};

/// The two-constraint, two-variable worked instance (max 2x1 + x2).
struct PaperIllustrationSpec {};

struct RandomSpec {
  std::uint64_t seed = 0;
  std::size_t m = 1;
  std::size_t n = 1;
  long magnitude = 9;        // entries drawn from [-magnitude, magnitude]
  unsigned density_pct = 100;
  bool rational_entries = false;  // denominators up to 10 when set
};

/// Like RandomSpec but forces zero right-hand sides to stress ties and
/// degenerate pivots.
struct DegenerateRandomSpec {
  std::uint64_t seed = 0;
  std::size_t m = 1;
  std::size_t n = 1;
  long magnitude = 4;
};

using GeneratorSpec = std::variant<KleeMintySpec, BealeSpec, PaperIllustrationSpec,
                                   RandomSpec, DegenerateRandomSpec>;

GeneralLp generate(const GeneratorSpec& spec);

/// Stable text id encoding the full spec; parse_id(spec_id(s)) == s.
std::string spec_id(const GeneratorSpec& spec);
GeneratorSpec parse_id(const std::string& id);

/// Regenerates the instance named by a corpus id.
inline GeneralLp regenerate(const std::string& id) { return generate(parse_id(id)); }

struct CorpusEntry {
  std::string id;
  GeneralLp lp;
};

/// Deterministic corpus: `count` instances cycling through the template
/// specs; seeded templates get a per-instance seed derived from seed_base.
std::vector<CorpusEntry> corpus(const std::vector<GeneratorSpec>& templates,
                                std::size_t count, std::uint64_t seed_base);

/// The default fuzz campaign templates for bounds max_m, max_n.
std::vector<GeneratorSpec> default_campaign(std::size_t max_m, std::size_t max_n);

}  // namespace complp
