#include "pie/clause.hpp"

#include "pie/error.hpp"

namespace pie {

Literal Literal::substitute(const TermSubst& s) const {
  Literal out{positive, predicate, {}};
  out.args.reserve(args.size());
  for (const auto& a : args) out.args.push_back(a.substitute(s));
  return out;
}

void Literal::collect_variables(std::set<std::string>& out) const {
  for (const auto& a : args) a.collect_variables(out);
}

std::set<std::string> Clause::variables() const {
  std::set<std::string> out;
  for (const auto& l : literals) l.collect_variables(out);
  return out;
}

const SkolemSymbol* ClausalForm::skolem(const std::string& name) const {
  for (const auto& s : skolems)
    if (s.name == name) return &s;
  return nullptr;
}

Formula literal_formula(const Literal& l) {
  Formula a = l.is_equality() ? Formula::equal(l.args[0], l.args[1]) : Formula::atom(l.predicate, l.args);
  return l.positive ? a : Formula::negation(a);
}

Formula clause_matrix(const Clause& c) {
  std::vector<Formula> ls;
  ls.reserve(c.literals.size());
  for (const auto& l : c.literals) ls.push_back(literal_formula(l));
  return Formula::disjunction(std::move(ls));
}

Formula clause_formula(const Clause& c) { return universal_closure(clause_matrix(c)); }

Formula clauses_formula(const std::vector<Clause>& cs) {
  std::vector<Formula> fs;
  fs.reserve(cs.size());
  for (const auto& c : cs) fs.push_back(clause_formula(c));
  return Formula::conjunction(std::move(fs));
}

Literal formula_literal(const Formula& f) {
  bool pos = true;
  const Formula* a = &f;
  if (f.is(Connective::Not)) {
    pos = false;
    a = &f.body();
  }
  if (a->is(Connective::Atom)) return {pos, a->name(), a->terms()};
  if (a->is(Connective::Equal)) return {pos, "=", a->terms()};
  throw FragmentError("not a literal");
}

}  // namespace pie
