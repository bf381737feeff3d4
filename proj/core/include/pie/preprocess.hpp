#pragma once

#include <set>
#include <string>

#include "pie/clause.hpp"
#include "pie/formula.hpp"

namespace pie {

enum class ClausifyMode { Equivalence, Definitional };

// Predicates whose semantics a simplification must keep. Equality is always
// protected.
struct ProtectedVocabulary {
  std::set<std::string> predicates;
  bool everything = false;

  static ProtectedVocabulary all() { return {{}, true}; }
  bool contains(const std::string& p) const { return everything || p == "=" || predicates.contains(p); }
};

// First-order `f` to clauses. Existentials are Skolemized after miniscoping;
// Skolem names come from `names` when given.
ClausalForm clausify(const Formula& f, ClausifyMode mode = ClausifyMode::Equivalence);
ClausalForm clausify(const Formula& f, ClausifyMode mode, FreshNames& names);

ClausalForm simplify_clausal(const ClausalForm& cf, const ProtectedVocabulary& protect);

// Throws UnskolemizeError when the Skolem terms cannot be turned back into
// quantifiers.
Formula unskolemize(const ClausalForm& cf);

// Clause-shaped disjunctions become implications (negative literals on the
// left).
Formula reform(const Formula& f);

// Equivalence-preserving formula simplification: constants, trivial
// equalities, one-point rule, vacuous quantifiers, duplicate operands and
// ground-literal context propagation.
Formula simplify_formula(const Formula& f);

Formula pipeline_c6(const Formula& f);
Formula pipeline_d6(const Formula& f);

// One-way matching of `pattern` onto `target`, extending `s`.
bool match_term(const Term& pattern, const Term& target, TermSubst& s);
bool match_literal(const Literal& pattern, const Literal& target, TermSubst& s);

// Whether some instance of `c` is a subset of `d`.
bool subsumes(const Clause& c, const Clause& d);

}  // namespace pie
