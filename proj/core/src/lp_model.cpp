#include "complp/lp_model.hpp"

#include <algorithm>
#include <sstream>

namespace complp {

void GeneralLp::validate() const {
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (constraints[i].coeffs.size() != num_vars())
      throw ModelError("constraint " + std::to_string(i + 1) + " has " +
                       std::to_string(constraints[i].coeffs.size()) +
                       " coefficients, expected " + std::to_string(num_vars()));
  }
  if (!is_free.empty() && is_free.size() != num_vars())
    throw ModelError("free-variable list length does not match variable count");
}

CanonicalLp canonicalize(const GeneralLp& lp) {
  lp.validate();
  const std::size_t n0 = lp.num_vars();

  CanonicalLp can;
  can.original_sense = lp.sense;
  can.var_origin.resize(n0);

  // column layout: original variables first, then the negative parts of
  // free variables appended in variable order
  std::size_t n = n0;
  for (std::size_t j = 0; j < n0; ++j) {
    can.var_origin[j].positive_part = j;
    if (!lp.is_free.empty() && lp.is_free[j]) can.var_origin[j].negative_part = n++;
  }

  can.c.assign(n, Rational(0));
  for (std::size_t j = 0; j < n0; ++j) {
    Rational cj = lp.objective[j];
    if (lp.sense == Sense::Minimize) cj = -cj;
    can.c[j] = cj;
    if (can.var_origin[j].negative_part) can.c[*can.var_origin[j].negative_part] = -cj;
  }

  std::size_t m = 0;
  for (const auto& con : lp.constraints) m += (con.rel == Relation::Equal) ? 2 : 1;

  can.A = Matrix(m, n);
  can.b.assign(m, Rational(0));
  can.row_origin.resize(m);

  std::size_t r = 0;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& con = lp.constraints[i];
    const int copies = (con.rel == Relation::Equal) ? 2 : 1;
    for (int k = 0; k < copies; ++k) {
      // first copy keeps the row direction for <= and =; >= and the second
      // half of an equality are negated
      const bool negate = (con.rel == Relation::GreaterEq) || k == 1;
      const Rational sign(negate ? -1 : 1);
      for (std::size_t j = 0; j < n0; ++j) {
        const Rational a = sign * con.coeffs[j];
        can.A.at(r, j) = a;
        if (can.var_origin[j].negative_part)
          can.A.at(r, *can.var_origin[j].negative_part) = -a;
      }
      can.b[r] = sign * con.rhs;
      can.row_origin[r] = i;
      ++r;
    }
  }
  return can;
}

std::vector<Rational> map_solution_back(const CanonicalLp& can, const std::vector<Rational>& x) {
  if (x.size() != can.n()) throw ModelError("canonical solution has wrong length");
  std::vector<Rational> out(can.var_origin.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = x[can.var_origin[j].positive_part];
    if (can.var_origin[j].negative_part) out[j] -= x[*can.var_origin[j].negative_part];
  }
  return out;
}

Rational map_objective_back(const CanonicalLp& can, const Rational& objective) {
  return can.original_sense == Sense::Minimize ? -objective : objective;
}

namespace {

struct Cursor {
  std::size_t line = 0;
  std::size_t col = 0;
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

Rational parse_number(const std::string& tok, std::size_t line_no, std::size_t col) {
  try {
    return Rational::from_string(tok);
  } catch (const RationalError& e) {
    throw ParseError(line_no, col, e.what());
  }
}

}  // namespace

GeneralLp parse_instance(std::string_view text) {
  GeneralLp lp;
  bool have_sense = false, have_vars = false, have_c = false;
  std::size_t nvars = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto toks = tokenize(raw);
    if (toks.empty()) continue;

    if (toks[0] == "sense:") {
      if (toks.size() != 2 || (toks[1] != "max" && toks[1] != "min"))
        throw ParseError(line_no, 1, "expected 'sense: max' or 'sense: min'");
      lp.sense = toks[1] == "max" ? Sense::Maximize : Sense::Minimize;
      have_sense = true;
    } else if (toks[0] == "vars:") {
      if (toks.size() != 2) throw ParseError(line_no, 1, "expected 'vars: <count>'");
      try {
        nvars = std::stoul(toks[1]);
      } catch (const std::exception&) {
        throw ParseError(line_no, 2, "bad variable count '" + toks[1] + "'");
      }
      have_vars = true;
    } else if (toks[0] == "c:") {
      if (!have_vars) throw ParseError(line_no, 1, "'c:' before 'vars:'");
      if (toks.size() != nvars + 1)
        throw ParseError(line_no, 1, "objective needs " + std::to_string(nvars) + " entries");
      for (std::size_t j = 1; j < toks.size(); ++j)
        lp.objective.push_back(parse_number(toks[j], line_no, j + 1));
      have_c = true;
    } else if (toks[0] == "free:") {
      if (!have_vars) throw ParseError(line_no, 1, "'free:' before 'vars:'");
      lp.is_free.assign(nvars, false);
      for (std::size_t j = 1; j < toks.size(); ++j) {
        std::size_t idx = 0;
        try {
          idx = std::stoul(toks[j]);
        } catch (const std::exception&) {
          throw ParseError(line_no, j + 1, "bad free-variable index '" + toks[j] + "'");
        }
        if (idx < 1 || idx > nvars)
          throw ParseError(line_no, j + 1, "free-variable index out of range");
        lp.is_free[idx - 1] = true;
      }
    } else {
      // constraint row: a1 ... an <rel> b
      if (!have_vars) throw ParseError(line_no, 1, "constraint before 'vars:'");
      if (toks.size() != nvars + 2)
        throw ParseError(line_no, 1, "constraint needs " + std::to_string(nvars) +
                                         " coefficients, a relation, and a right-hand side");
      Constraint con;
      for (std::size_t j = 0; j < nvars; ++j)
        con.coeffs.push_back(parse_number(toks[j], line_no, j + 1));
      const std::string& rel = toks[nvars];
      if (rel == "<=") con.rel = Relation::LessEq;
      else if (rel == "=") con.rel = Relation::Equal;
      else if (rel == ">=") con.rel = Relation::GreaterEq;
      else throw ParseError(line_no, nvars + 1, "unknown relation '" + rel + "'");
      con.rhs = parse_number(toks[nvars + 1], line_no, nvars + 2);
      lp.constraints.push_back(std::move(con));
    }
  }

  if (!have_sense) throw ParseError(line_no, 1, "missing 'sense:' line");
  if (!have_vars) throw ParseError(line_no, 1, "missing 'vars:' line");
  if (!have_c) throw ParseError(line_no, 1, "missing 'c:' line");
  // normalized form: is_free is empty when no variable is free
  if (std::find(lp.is_free.begin(), lp.is_free.end(), true) == lp.is_free.end())
    lp.is_free.clear();
  lp.validate();
  return lp;
}

std::string emit_instance(const GeneralLp& lp) {
  lp.validate();
  std::ostringstream out;
  out << "sense: " << (lp.sense == Sense::Maximize ? "max" : "min") << "\n";
  out << "vars: " << lp.num_vars() << "\n";
  out << "c:";
  for (const auto& v : lp.objective) out << " " << v.str();
  out << "\n";
  for (const auto& con : lp.constraints) {
    for (const auto& v : con.coeffs) out << v.str() << " ";
    switch (con.rel) {
      case Relation::LessEq: out << "<="; break;
      case Relation::Equal: out << "="; break;
      case Relation::GreaterEq: out << ">="; break;
    }
    out << " " << con.rhs.str() << "\n";
  }
  if (std::find(lp.is_free.begin(), lp.is_free.end(), true) != lp.is_free.end()) {
    out << "free:";
    for (std::size_t j = 0; j < lp.is_free.size(); ++j)
      if (lp.is_free[j]) out << " " << (j + 1);
    out << "\n";
  }
  return out.str();
}

}  // namespace complp
