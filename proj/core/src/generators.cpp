#include "complp/generators.hpp"

#include <cctype>
#include <sstream>

namespace complp {

namespace {

// splitmix64: tiny, stable across platforms, good enough for instance noise
struct Rng {
  std::uint64_t state;

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  long range(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool chance_pct(unsigned pct) { return next() % 100 < pct; }
};

Rational pow_long(long base, unsigned exp) {
  Rational acc(1);
  for (unsigned k = 0; k < exp; ++k) acc *= Rational(base);
  return acc;
}

GeneralLp make_klee_minty(const KleeMintySpec& s) {
  if (s.d < 1) throw GeneratorError("klee-minty needs d >= 1");
  GeneralLp lp;
  lp.sense = Sense::Maximize;
  for (unsigned j = 1; j <= s.d; ++j) lp.objective.push_back(pow_long(s.coeff_base, s.d - j));
  for (unsigned i = 1; i <= s.d; ++i) {
    Constraint con;
    con.coeffs.assign(s.d, Rational(0));
    for (unsigned j = 1; j < i; ++j)
      con.coeffs[j - 1] = Rational(2) * pow_long(s.coeff_base, i - j - 1);
    con.coeffs[i - 1] = Rational(1);
    con.rel = Relation::LessEq;
    con.rhs = pow_long(s.rhs_base, i);
    lp.constraints.push_back(std::move(con));
  }
  return lp;
}

GeneralLp make_beale() {
  GeneralLp lp;
  lp.sense = Sense::Maximize;
  lp.objective = {Rational(3, 4), Rational(-150), Rational(1, 50), Rational(-6)};
  lp.constraints = {
      {{Rational(1, 4), Rational(-60), Rational(-1, 25), Rational(9)}, Relation::LessEq, Rational(0)},
      {{Rational(1, 2), Rational(-90), Rational(-1, 50), Rational(3)}, Relation::LessEq, Rational(0)},
      {{Rational(0), Rational(0), Rational(1), Rational(0)}, Relation::LessEq, Rational(1)},
  };
  return lp;
}

GeneralLp make_paper_illustration() {
  GeneralLp lp;
  lp.sense = Sense::Maximize;
  lp.objective = {Rational(2), Rational(1)};
  lp.constraints = {
      {{Rational(1), Rational(1)}, Relation::LessEq, Rational(5)},
      {{Rational(1), Rational(0)}, Relation::LessEq, Rational(2)},
  };
  return lp;
}

Rational draw_entry(Rng& rng, long magnitude, bool rational_entries) {
  const long num = rng.range(-magnitude, magnitude);
  if (!rational_entries) return Rational(num);
  return Rational(num, rng.range(1, 10));
}

GeneralLp make_random(const RandomSpec& s) {
  if (s.m < 1 || s.n < 1 || s.magnitude < 1 || s.density_pct == 0 || s.density_pct > 100)
    throw GeneratorError("bad random spec");
  Rng rng{s.seed};
  GeneralLp lp;
  lp.sense = Sense::Maximize;
  for (std::size_t j = 0; j < s.n; ++j)
    lp.objective.push_back(draw_entry(rng, s.magnitude, s.rational_entries));
  for (std::size_t i = 0; i < s.m; ++i) {
    Constraint con;
    for (std::size_t j = 0; j < s.n; ++j)
      con.coeffs.push_back(rng.chance_pct(s.density_pct)
                               ? draw_entry(rng, s.magnitude, s.rational_entries)
                               : Rational(0));
    con.rel = Relation::LessEq;
    con.rhs = Rational(rng.range(-s.magnitude, s.magnitude + 2));
    lp.constraints.push_back(std::move(con));
  }
  return lp;
}

GeneralLp make_degenerate(const DegenerateRandomSpec& s) {
  if (s.m < 1 || s.n < 1 || s.magnitude < 1) throw GeneratorError("bad degenerate spec");
  Rng rng{s.seed};
  GeneralLp lp;
  lp.sense = Sense::Maximize;
  for (std::size_t j = 0; j < s.n; ++j)
    lp.objective.push_back(Rational(rng.range(-s.magnitude, s.magnitude)));
  for (std::size_t i = 0; i < s.m; ++i) {
    Constraint con;
    for (std::size_t j = 0; j < s.n; ++j)
      con.coeffs.push_back(Rational(rng.range(-s.magnitude, s.magnitude)));
    con.rel = Relation::LessEq;
    // roughly half the right-hand sides pinned to zero
    con.rhs = rng.chance_pct(50) ? Rational(0) : Rational(rng.range(0, s.magnitude));
    lp.constraints.push_back(std::move(con));
  }
  return lp;
}

}  // namespace

GeneralLp generate(const GeneratorSpec& spec) {
  return std::visit(
      [](const auto& s) -> GeneralLp {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KleeMintySpec>) return make_klee_minty(s);
        else if constexpr (std::is_same_v<T, BealeSpec>) return make_beale();
        else if constexpr (std::is_same_v<T, PaperIllustrationSpec>) return make_paper_illustration();
        else if constexpr (std::is_same_v<T, RandomSpec>) return make_random(s);
        else return make_degenerate(s);
      },
      spec);
}

std::string spec_id(const GeneratorSpec& spec) {
  std::ostringstream out;
  std::visit(
      [&out](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KleeMintySpec>) {
          out << "km-d" << s.d;
          if (s.coeff_base != 2 || s.rhs_base != 5)
            out << "-b" << s.coeff_base << "-r" << s.rhs_base;
        } else if constexpr (std::is_same_v<T, BealeSpec>) {
          out << "beale";
        } else if constexpr (std::is_same_v<T, PaperIllustrationSpec>) {
          out << "paper";
        } else if constexpr (std::is_same_v<T, RandomSpec>) {
          out << "rnd-s" << s.seed << "-m" << s.m << "-n" << s.n << "-g" << s.magnitude
              << "-p" << s.density_pct;
          if (s.rational_entries) out << "-q";
        } else {
          out << "deg-s" << s.seed << "-m" << s.m << "-n" << s.n << "-g" << s.magnitude;
        }
      },
      spec);
  return out.str();
}

namespace {

// "key<number>" fields separated by '-'; values can be negative (bases) or
// full 64-bit seeds
struct IdFields {
  std::vector<std::pair<char, std::string>> fields;
  bool flag_q = false;

  const std::string& raw(char key, const std::string& id) const {
    for (const auto& [k, v] : fields)
      if (k == key) return v;
    throw GeneratorError("corpus id '" + id + "' is missing field '" + std::string(1, key) + "'");
  }
  std::uint64_t get_u64(char key, const std::string& id) const {
    try {
      return std::stoull(raw(key, id));
    } catch (const std::exception&) {
      throw GeneratorError("bad field '" + std::string(1, key) + "' in corpus id '" + id + "'");
    }
  }
  long get_long(char key, const std::string& id) const {
    try {
      return std::stol(raw(key, id));
    } catch (const std::exception&) {
      throw GeneratorError("bad field '" + std::string(1, key) + "' in corpus id '" + id + "'");
    }
  }
  bool has(char key) const {
    for (const auto& [k, v] : fields)
      if (k == key) return true;
    return false;
  }
};

IdFields split_fields(const std::string& id, std::size_t from) {
  IdFields out;
  std::size_t pos = from;
  while (pos < id.size()) {
    auto dash = id.find('-', pos);
    // a '-' immediately after a key is a negative value's sign
    if (dash != std::string::npos && dash == pos + 1 && std::isalpha(id[pos]))
      dash = id.find('-', dash + 1);
    if (dash == std::string::npos) dash = id.size();
    const std::string tok = id.substr(pos, dash - pos);
    if (tok == "q") out.flag_q = true;
    else if (!tok.empty()) out.fields.emplace_back(tok[0], tok.substr(1));
    pos = dash + 1;
  }
  return out;
}

}  // namespace

GeneratorSpec parse_id(const std::string& id) {
  if (id == "beale") return BealeSpec{};
  if (id == "paper") return PaperIllustrationSpec{};
  if (id.rfind("km-", 0) == 0) {
    const auto f = split_fields(id, 3);
    KleeMintySpec s;
    s.d = static_cast<unsigned>(f.get_u64('d', id));
    if (f.has('b')) s.coeff_base = f.get_long('b', id);
    if (f.has('r')) s.rhs_base = f.get_long('r', id);
    return s;
  }
  if (id.rfind("rnd-", 0) == 0) {
    const auto f = split_fields(id, 4);
    RandomSpec s;
    s.seed = f.get_u64('s', id);
    s.m = static_cast<std::size_t>(f.get_u64('m', id));
    s.n = static_cast<std::size_t>(f.get_u64('n', id));
    s.magnitude = f.get_long('g', id);
    s.density_pct = static_cast<unsigned>(f.get_u64('p', id));
    s.rational_entries = f.flag_q;
    return s;
  }
  if (id.rfind("deg-", 0) == 0) {
    const auto f = split_fields(id, 4);
    DegenerateRandomSpec s;
    s.seed = f.get_u64('s', id);
    s.m = static_cast<std::size_t>(f.get_u64('m', id));
    s.n = static_cast<std::size_t>(f.get_u64('n', id));
    s.magnitude = f.get_long('g', id);
    return s;
  }
  throw GeneratorError("unknown corpus id '" + id + "'");
}

std::vector<CorpusEntry> corpus(const std::vector<GeneratorSpec>& templates,
                                std::size_t count, std::uint64_t seed_base) {
  if (templates.empty()) throw GeneratorError("corpus needs at least one template");
  if (count < 1) throw GeneratorError("corpus needs count >= 1");
  std::vector<CorpusEntry> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    GeneratorSpec spec = templates[k % templates.size()];
    Rng mix{seed_base + k};
    const std::uint64_t instance_seed = mix.next();
    if (auto* r = std::get_if<RandomSpec>(&spec)) r->seed = instance_seed;
    if (auto* d = std::get_if<DegenerateRandomSpec>(&spec)) d->seed = instance_seed;
    out.push_back({spec_id(spec), generate(spec)});
  }
  return out;
}

std::vector<GeneratorSpec> default_campaign(std::size_t max_m, std::size_t max_n) {
  std::vector<GeneratorSpec> templates;
  for (std::size_t m = 1; m <= max_m; ++m) {
    for (std::size_t n = 1; n <= max_n; ++n) {
      templates.push_back(RandomSpec{0, m, n, 6, 100, false});
      templates.push_back(RandomSpec{0, m, n, 9, 70, false});
      if ((m + n) % 3 == 0) templates.push_back(RandomSpec{0, m, n, 5, 100, true});
      if ((m + n) % 4 == 0) templates.push_back(DegenerateRandomSpec{0, m, n, 4});
    }
  }
  return templates;
}

}  // namespace complp
