#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pie/formula.hpp"
#include "pie/term.hpp"

namespace pie {

// Signed atom. Equality literals use the predicate name "=" with two args.
struct Literal {
  bool positive = true;
  std::string predicate;
  std::vector<Term> args;

  bool is_equality() const { return predicate == "="; }
  Literal negated() const { return {!positive, predicate, args}; }
  Literal substitute(const TermSubst& s) const;
  void collect_variables(std::set<std::string>& out) const;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    if (auto c = a.positive <=> b.positive; c != 0) return c;
    return a.args <=> b.args;
  }
};

// Disjunction of literals; variables are implicitly universally quantified.
struct Clause {
  std::vector<Literal> literals;
  std::optional<int> origin;

  bool empty() const { return literals.empty(); }
  std::set<std::string> variables() const;
  friend bool operator==(const Clause& a, const Clause& b) { return a.literals == b.literals; }
};

struct SkolemSymbol {
  std::string name;
  int arity = 0;
  // The universally quantified variables the witness was introduced under.
  std::vector<std::string> dependencies;
  // Name of the existential variable it replaced, if known.
  std::string variable;
};

struct ClausalForm {
  std::vector<Clause> clauses;
  std::vector<SkolemSymbol> skolems;
  // Definition predicates introduced by structure-preserving clausification.
  std::set<std::string> definitions;

  const SkolemSymbol* skolem(const std::string& name) const;
};

Formula literal_formula(const Literal& l);
// Disjunction of the literals, without quantifier prefix.
Formula clause_matrix(const Clause& c);
// Universal closure of the disjunction.
Formula clause_formula(const Clause& c);
Formula clauses_formula(const std::vector<Clause>& cs);

// Literal from an Atom/Equal formula or the negation of one.
Literal formula_literal(const Formula& f);

}  // namespace pie
