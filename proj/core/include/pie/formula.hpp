#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pie/term.hpp"

namespace pie {

enum class Connective : std::uint8_t {
  Atom,
  Equal,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists,
  Forall2,
  Exists2,
  Lambda,
  MacroCall,
  Apply,
};

// A predicate symbol as it appears in a second-order quantifier. The arity is
// resolved against the quantified formula when needed.
struct PredicateSpec {
  std::string name;
  std::optional<int> arity;

  friend bool operator==(const PredicateSpec&, const PredicateSpec&) = default;
  friend auto operator<=>(const PredicateSpec&, const PredicateSpec&) = default;
};

// Recursive first-/second-order formula. Immutable value; copies share nodes.
//
// And/Or are n-ary and always flattened by the constructors. MacroCall nodes
// carry their arguments as generic terms (operators and lists encoded as
// compounds), which the macro processor reinterprets per parameter role.
class Formula {
 public:
  // Truth.
  Formula();
  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula equal(Term lhs, Term rhs);
  static Formula truth();
  static Formula falsity();
  static Formula negation(Formula f);
  // Flattening constructors. An empty list yields Truth/Falsity, a singleton
  // yields its element.
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  // An empty variable list yields the body itself.
  static Formula forall(std::vector<std::string> vars, Formula body);
  static Formula exists(std::vector<std::string> vars, Formula body);
  static Formula forall2(std::vector<PredicateSpec> preds, Formula body);
  static Formula exists2(std::vector<PredicateSpec> preds, Formula body);
  static Formula lambda(std::vector<std::string> params, Formula body);
  static Formula macro_call(std::string name, std::vector<Term> args = {});
  static Formula apply(Formula head, std::vector<Term> args);

  Connective op() const { return node_->op; }
  bool is(Connective c) const { return node_->op == c; }
  bool is_literal() const;
  bool is_quantifier() const;
  bool is_second_order_quantifier() const;

  // Predicate name (Atom) or macro name (MacroCall).
  const std::string& name() const { return node_->name; }
  // Atom/MacroCall/Apply arguments; Equal holds {lhs, rhs}.
  const std::vector<Term>& terms() const { return node_->terms; }
  const std::vector<Formula>& children() const { return node_->children; }
  // Bound variables (Forall/Exists) or λ parameters.
  const std::vector<std::string>& vars() const { return node_->vars; }
  const std::vector<PredicateSpec>& preds() const { return node_->preds; }

  // Single child of Not / quantifiers / Lambda; head of Apply.
  const Formula& body() const { return node_->children.front(); }
  const Formula& lhs() const { return node_->children[0]; }
  const Formula& rhs() const { return node_->children[1]; }

  // Same node kind and metadata with replaced children.
  Formula with_children(std::vector<Formula> children) const;
  Formula with_body(Formula body) const;

  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node {
    Connective op;
    std::string name;
    std::vector<Term> terms;
    std::vector<Formula> children;
    std::vector<std::string> vars;
    std::vector<PredicateSpec> preds;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);
  std::shared_ptr<const Node> node_;
};

enum class Polarity : std::uint8_t { None, Positive, Negative, Both };

Polarity combine(Polarity a, Polarity b);
Polarity flip(Polarity p);

struct PolarityOccurrence {
  enum class Kind : std::uint8_t { Predicate, Function };
  std::string symbol;
  Kind kind;
  int arity;
  // None for function symbols.
  Polarity polarity;

  friend bool operator==(const PolarityOccurrence&, const PolarityOccurrence&) = default;
  friend auto operator<=>(const PolarityOccurrence&, const PolarityOccurrence&) = default;
};

// Predicates with polarity and function/constant symbols occurring free in `f`.
// Sorted by (symbol, kind, arity); one entry per symbol/kind/arity.
std::vector<PolarityOccurrence> free_symbols(const Formula& f);

std::set<std::string> free_variables(const Formula& f);

// Free predicate symbols with every arity they are used with.
std::map<std::string, std::set<int>> predicate_arities(const Formula& f);

// Free function/constant symbols as (name, arity).
std::set<std::pair<std::string, int>> function_symbols(const Formula& f);

// Every identifier appearing anywhere in `f`, bound or free.
std::set<std::string> all_names(const Formula& f);

bool is_first_order(const Formula& f);
bool contains_equality(const Formula& f);
bool occurs_free(const Formula& f, std::string_view predicate);

// Monotone fresh-name source. Names already reserved are skipped.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(const Formula& f) { reserve(f); }

  void reserve(std::string name) { used_.insert(std::move(name)); }
  void reserve(const Formula& f);
  bool used(const std::string& name) const { return used_.contains(name); }

  // base, base1, base2, ... (digits of `base` stripped first).
  std::string like(std::string_view base);
  std::string predicate() { return like("q"); }
  std::string variable() { return like("x"); }
  std::string skolem();

 private:
  std::set<std::string> used_;
  std::map<std::string, int> counters_;
};

// Capture-avoiding renaming of a free predicate.
Formula rename_predicate(const Formula& f, const PredicateSpec& p, const std::string& replacement);
// Replaces every free atom p(t̄) by the β-reduced body of `lambda`.
Formula substitute_predicate(const Formula& f, const PredicateSpec& p, const Formula& lambda);

// Capture-avoiding substitution of free first-order variables.
Formula substitute_terms(const Formula& f, const TermSubst& subst);
// Replaces a (ground or free-variable) term everywhere it occurs free.
Formula replace_term(const Formula& f, const Term& from, const Term& to);

// β-reduces every application whose head is a λ-abstraction.
Formula beta_reduce(const Formula& f);

Formula nnf(const Formula& f);

// α-renames bound first-order variables apart from each other and from every
// free symbol.
Formula rename_bound(const Formula& f);
Formula rename_bound(const Formula& f, FreshNames& names);

// Renames bound first-order variables to short readable names (x1 -> x,
// then x, y, z, u, v, w) where no capture or shadowing results.
Formula tidy_variables(const Formula& f);

// Truth/Falsity absorption and flattening only.
Formula simplify_constants(const Formula& f);

// Universal/existential closure over the free variables of `f`.
Formula universal_closure(const Formula& f);

}  // namespace pie
