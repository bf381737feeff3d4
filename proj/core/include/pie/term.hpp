#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pie {

// First-order term. Immutable; copies share structure.
//
// Constants are zero-arity compounds. Whether a lowercase identifier denotes a
// variable or a constant is decided when the surrounding formula is read: a
// name bound by an enclosing quantifier or λ becomes a Variable.
class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Compound };

  static Term variable(std::string name);
  static Term compound(std::string functor, std::vector<Term> args = {});
  static Term constant(std::string name) { return compound(std::move(name)); }

  Kind kind() const { return rep_->kind; }
  bool is_variable() const { return rep_->kind == Kind::Variable; }
  bool is_compound() const { return rep_->kind == Kind::Compound; }
  bool is_constant() const { return is_compound() && rep_->args.empty(); }

  const std::string& name() const { return rep_->name; }
  const std::vector<Term>& args() const { return rep_->args; }
  std::size_t arity() const { return rep_->args.size(); }

  bool is_ground() const;
  bool contains_variable(std::string_view name) const;
  bool contains(const Term& sub) const;
  void collect_variables(std::set<std::string>& out) const;
  // Every functor (including constants) as (name, arity).
  void collect_functors(std::set<std::pair<std::string, int>>& out) const;

  Term substitute(const std::map<std::string, Term>& subst) const;
  // Replaces every occurrence of `from` by `to`.
  Term replace(const Term& from, const Term& to) const;

  std::size_t size() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Rep {
    Kind kind;
    std::string name;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

using TermSubst = std::map<std::string, Term>;

}  // namespace pie
