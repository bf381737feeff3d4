#include "pie/term.hpp"

namespace pie {

Term Term::variable(std::string name) {
  return Term(std::make_shared<const Rep>(Rep{Kind::Variable, std::move(name), {}}));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  return Term(std::make_shared<const Rep>(Rep{Kind::Compound, std::move(functor), std::move(args)}));
}

bool Term::is_ground() const {
  if (is_variable()) return false;
  for (const auto& a : args())
    if (!a.is_ground()) return false;
  return true;
}

bool Term::contains_variable(std::string_view v) const {
  if (is_variable()) return name() == v;
  for (const auto& a : args())
    if (a.contains_variable(v)) return true;
  return false;
}

bool Term::contains(const Term& sub) const {
  if (*this == sub) return true;
  for (const auto& a : args())
    if (a.contains(sub)) return true;
  return false;
}

void Term::collect_variables(std::set<std::string>& out) const {
  if (is_variable()) {
    out.insert(name());
    return;
  }
  for (const auto& a : args()) a.collect_variables(out);
}

void Term::collect_functors(std::set<std::pair<std::string, int>>& out) const {
  if (is_variable()) return;
  out.emplace(name(), static_cast<int>(arity()));
  for (const auto& a : args()) a.collect_functors(out);
}

Term Term::substitute(const TermSubst& subst) const {
  if (subst.empty()) return *this;
  if (is_variable()) {
    auto it = subst.find(name());
    return it == subst.end() ? *this : it->second;
  }
  if (args().empty()) return *this;
  std::vector<Term> out;
  out.reserve(arity());
  bool changed = false;
  for (const auto& a : args()) {
    out.push_back(a.substitute(subst));
    changed = changed || out.back().rep_ != a.rep_;
  }
  return changed ? compound(name(), std::move(out)) : *this;
}

Term Term::replace(const Term& from, const Term& to) const {
  if (*this == from) return to;
  if (is_variable() || args().empty()) return *this;
  std::vector<Term> out;
  out.reserve(arity());
  for (const auto& a : args()) out.push_back(a.replace(from, to));
  return compound(name(), std::move(out));
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& a : args()) n += a.size();
  return n;
}

bool operator==(const Term& a, const Term& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.args()[i] == b.args()[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.rep_ == b.rep_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (auto c = a.args()[i] <=> b.args()[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

}  // namespace pie
