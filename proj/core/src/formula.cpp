#include "pie/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "pie/error.hpp"

namespace pie {

Formula Formula::make(Node n) { return Formula(std::make_shared<const Node>(std::move(n))); }

Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  return make({Connective::Atom, std::move(predicate), std::move(args), {}, {}, {}});
}

Formula Formula::equal(Term lhs, Term rhs) {
  return make({Connective::Equal, {}, {std::move(lhs), std::move(rhs)}, {}, {}, {}});
}

Formula Formula::truth() {
  static const Formula t = make({Connective::True, {}, {}, {}, {}, {}});
  return t;
}

Formula::Formula() : node_(truth().node_) {}

Formula Formula::falsity() {
  static const Formula f = make({Connective::False, {}, {}, {}, {}, {}});
  return f;
}

Formula Formula::negation(Formula f) { return make({Connective::Not, {}, {}, {std::move(f)}, {}, {}}); }

namespace {

std::vector<Formula> flatten(Connective op, std::vector<Formula> fs) {
  std::vector<Formula> out;
  out.reserve(fs.size());
  for (auto& f : fs) {
    if (f.op() == op) {
      out.insert(out.end(), f.children().begin(), f.children().end());
    } else {
      out.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace

Formula Formula::conjunction(std::vector<Formula> fs) {
  auto flat = flatten(Connective::And, std::move(fs));
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat.front();
  return make({Connective::And, {}, {}, std::move(flat), {}, {}});
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  auto flat = flatten(Connective::Or, std::move(fs));
  if (flat.empty()) return falsity();
  if (flat.size() == 1) return flat.front();
  return make({Connective::Or, {}, {}, std::move(flat), {}, {}});
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return make({Connective::Implies, {}, {}, {std::move(lhs), std::move(rhs)}, {}, {}});
}

Formula Formula::iff(Formula lhs, Formula rhs) {
  return make({Connective::Iff, {}, {}, {std::move(lhs), std::move(rhs)}, {}, {}});
}

Formula Formula::forall(std::vector<std::string> vars, Formula body) {
  if (vars.empty()) return body;
  return make({Connective::Forall, {}, {}, {std::move(body)}, std::move(vars), {}});
}

Formula Formula::exists(std::vector<std::string> vars, Formula body) {
  if (vars.empty()) return body;
  return make({Connective::Exists, {}, {}, {std::move(body)}, std::move(vars), {}});
}

Formula Formula::forall2(std::vector<PredicateSpec> preds, Formula body) {
  if (preds.empty()) return body;
  return make({Connective::Forall2, {}, {}, {std::move(body)}, {}, std::move(preds)});
}

Formula Formula::exists2(std::vector<PredicateSpec> preds, Formula body) {
  if (preds.empty()) return body;
  return make({Connective::Exists2, {}, {}, {std::move(body)}, {}, std::move(preds)});
}

Formula Formula::lambda(std::vector<std::string> params, Formula body) {
  return make({Connective::Lambda, {}, {}, {std::move(body)}, std::move(params), {}});
}

Formula Formula::macro_call(std::string name, std::vector<Term> args) {
  return make({Connective::MacroCall, std::move(name), std::move(args), {}, {}, {}});
}

Formula Formula::apply(Formula head, std::vector<Term> args) {
  return make({Connective::Apply, {}, std::move(args), {std::move(head)}, {}, {}});
}

bool Formula::is_literal() const {
  switch (op()) {
    case Connective::Atom:
    case Connective::Equal:
      return true;
    case Connective::Not:
      return body().is(Connective::Atom) || body().is(Connective::Equal);
    default:
      return false;
  }
}

bool Formula::is_quantifier() const {
  return is(Connective::Forall) || is(Connective::Exists) || is_second_order_quantifier();
}

bool Formula::is_second_order_quantifier() const {
  return is(Connective::Forall2) || is(Connective::Exists2);
}

Formula Formula::with_children(std::vector<Formula> children) const {
  if (op() == Connective::And) return conjunction(std::move(children));
  if (op() == Connective::Or) return disjunction(std::move(children));
  Node n = *node_;
  n.children = std::move(children);
  return make(std::move(n));
}

Formula Formula::with_body(Formula body) const { return with_children({std::move(body)}); }

std::size_t Formula::size() const {
  std::size_t n = 1 + terms().size();
  for (const auto& c : children()) n += c.size();
  return n;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.op <=> y.op; c != 0) return c;
  if (auto c = x.name <=> y.name; c != 0) return c;
  if (auto c = x.terms.size() <=> y.terms.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.terms.size(); ++i)
    if (auto c = x.terms[i] <=> y.terms[i]; c != 0) return c;
  if (auto c = x.vars <=> y.vars; c != 0) return c;
  if (auto c = x.preds <=> y.preds; c != 0) return c;
  if (auto c = x.children.size() <=> y.children.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (auto c = x.children[i] <=> y.children[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Polarity combine(Polarity a, Polarity b) {
  if (a == Polarity::None) return b;
  if (b == Polarity::None) return a;
  return a == b ? a : Polarity::Both;
}

Polarity flip(Polarity p) {
  switch (p) {
    case Polarity::Positive:
      return Polarity::Negative;
    case Polarity::Negative:
      return Polarity::Positive;
    default:
      return p;
  }
}

namespace {

struct SymbolCollector {
  std::map<std::tuple<std::string, PolarityOccurrence::Kind, int>, Polarity> seen;
  std::set<std::string> free_vars;

  void term(const Term& t, const std::set<std::string>& bound_vars) {
    if (t.is_variable()) {
      if (!bound_vars.contains(t.name())) free_vars.insert(t.name());
      return;
    }
    seen[{t.name(), PolarityOccurrence::Kind::Function, static_cast<int>(t.arity())}];
    for (const auto& a : t.args()) term(a, bound_vars);
  }

  void formula(const Formula& f, Polarity pol, std::set<std::string> bv, std::set<std::string> bp) {
    switch (f.op()) {
      case Connective::Atom: {
        if (!bp.contains(f.name())) {
          auto& p = seen[{f.name(), PolarityOccurrence::Kind::Predicate, static_cast<int>(f.terms().size())}];
          p = combine(p, pol);
        }
        for (const auto& t : f.terms()) term(t, bv);
        return;
      }
      case Connective::Equal:
        for (const auto& t : f.terms()) term(t, bv);
        return;
      case Connective::MacroCall:
        // Arguments are encoded source syntax, not terms.
        return;
      case Connective::True:
      case Connective::False:
        return;
      case Connective::Not:
        formula(f.body(), flip(pol), bv, bp);
        return;
      case Connective::And:
      case Connective::Or:
        for (const auto& c : f.children()) formula(c, pol, bv, bp);
        return;
      case Connective::Implies:
        formula(f.lhs(), flip(pol), bv, bp);
        formula(f.rhs(), pol, bv, bp);
        return;
      case Connective::Iff:
        formula(f.lhs(), Polarity::Both, bv, bp);
        formula(f.rhs(), Polarity::Both, bv, bp);
        return;
      case Connective::Forall:
      case Connective::Exists:
      case Connective::Lambda:
        bv.insert(f.vars().begin(), f.vars().end());
        formula(f.body(), pol, std::move(bv), std::move(bp));
        return;
      case Connective::Forall2:
      case Connective::Exists2:
        for (const auto& p : f.preds()) bp.insert(p.name);
        formula(f.body(), pol, std::move(bv), std::move(bp));
        return;
      case Connective::Apply:
        formula(f.body(), pol, bv, bp);
        for (const auto& t : f.terms()) term(t, bv);
        return;
    }
  }
};

}  // namespace

std::vector<PolarityOccurrence> free_symbols(const Formula& f) {
  SymbolCollector c;
  c.formula(f, Polarity::Positive, {}, {});
  std::vector<PolarityOccurrence> out;
  for (const auto& [key, pol] : c.seen) {
    const auto& [name, kind, arity] = key;
    out.push_back({name, kind, arity, kind == PolarityOccurrence::Kind::Function ? Polarity::None : pol});
  }
  return out;
}

std::set<std::string> free_variables(const Formula& f) {
  SymbolCollector c;
  c.formula(f, Polarity::Positive, {}, {});
  return c.free_vars;
}

std::map<std::string, std::set<int>> predicate_arities(const Formula& f) {
  std::map<std::string, std::set<int>> out;
  for (const auto& o : free_symbols(f))
    if (o.kind == PolarityOccurrence::Kind::Predicate) out[o.symbol].insert(o.arity);
  return out;
}

std::set<std::pair<std::string, int>> function_symbols(const Formula& f) {
  std::set<std::pair<std::string, int>> out;
  for (const auto& o : free_symbols(f))
    if (o.kind == PolarityOccurrence::Kind::Function) out.emplace(o.symbol, o.arity);
  return out;
}

namespace {

void collect_term_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.name());
  for (const auto& a : t.args()) collect_term_names(a, out);
}

void collect_names(const Formula& f, std::set<std::string>& out) {
  if (!f.name().empty()) out.insert(f.name());
  for (const auto& t : f.terms()) collect_term_names(t, out);
  for (const auto& v : f.vars()) out.insert(v);
  for (const auto& p : f.preds()) out.insert(p.name);
  for (const auto& c : f.children()) collect_names(c, out);
}

}  // namespace

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  collect_names(f, out);
  return out;
}

bool is_first_order(const Formula& f) {
  switch (f.op()) {
    case Connective::Forall2:
    case Connective::Exists2:
    case Connective::Lambda:
    case Connective::MacroCall:
    case Connective::Apply:
      return false;
    default:
      return std::all_of(f.children().begin(), f.children().end(), [](const Formula& c) { return is_first_order(c); });
  }
}

bool contains_equality(const Formula& f) {
  if (f.is(Connective::Equal)) return true;
  return std::any_of(f.children().begin(), f.children().end(), [](const Formula& c) { return contains_equality(c); });
}

bool occurs_free(const Formula& f, std::string_view predicate) {
  for (const auto& o : free_symbols(f))
    if (o.kind == PolarityOccurrence::Kind::Predicate && o.symbol == predicate) return true;
  return false;
}

void FreshNames::reserve(const Formula& f) {
  for (auto& n : all_names(f)) used_.insert(n);
}

std::string FreshNames::like(std::string_view base) {
  std::string stem(base);
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  while (!stem.empty() && stem.back() == '_') stem.pop_back();
  if (stem.empty()) stem = "x";
  int& i = counters_[stem];
  for (;; ++i) {
    std::string candidate = i == 0 ? stem : stem + std::to_string(i);
    if (!used_.contains(candidate)) {
      used_.insert(candidate);
      ++i;
      return candidate;
    }
  }
}

std::string FreshNames::skolem() {
  int& i = counters_["sk"];
  if (i == 0) i = 1;
  for (;; ++i) {
    std::string candidate = "sk" + std::to_string(i);
    if (!used_.contains(candidate)) {
      used_.insert(candidate);
      ++i;
      return candidate;
    }
  }
}

namespace {

// Capture-avoiding first-order substitution.
Formula subst_rec(const Formula& f, const TermSubst& s, FreshNames& fresh) {
  if (s.empty()) return f;
  switch (f.op()) {
    case Connective::Atom:
    case Connective::Equal:
    case Connective::MacroCall: {
      std::vector<Term> ts;
      ts.reserve(f.terms().size());
      for (const auto& t : f.terms()) ts.push_back(t.substitute(s));
      if (f.is(Connective::Atom)) return Formula::atom(f.name(), std::move(ts));
      if (f.is(Connective::Equal)) return Formula::equal(ts[0], ts[1]);
      return Formula::macro_call(f.name(), std::move(ts));
    }
    case Connective::Apply: {
      std::vector<Term> ts;
      for (const auto& t : f.terms()) ts.push_back(t.substitute(s));
      return Formula::apply(subst_rec(f.body(), s, fresh), std::move(ts));
    }
    case Connective::Forall:
    case Connective::Exists:
    case Connective::Lambda: {
      TermSubst inner = s;
      for (const auto& v : f.vars()) inner.erase(v);
      std::set<std::string> incoming;
      for (const auto& [k, t] : inner) t.collect_variables(incoming);
      std::vector<std::string> vars;
      for (const auto& v : f.vars()) {
        if (incoming.contains(v)) {
          auto nv = fresh.like(v);
          inner.insert_or_assign(v, Term::variable(nv));
          vars.push_back(nv);
        } else {
          vars.push_back(v);
        }
      }
      auto body = subst_rec(f.body(), inner, fresh);
      if (f.is(Connective::Forall)) return Formula::forall(std::move(vars), std::move(body));
      if (f.is(Connective::Exists)) return Formula::exists(std::move(vars), std::move(body));
      return Formula::lambda(std::move(vars), std::move(body));
    }
    default: {
      if (f.children().empty()) return f;
      std::vector<Formula> cs;
      cs.reserve(f.children().size());
      for (const auto& c : f.children()) cs.push_back(subst_rec(c, s, fresh));
      return f.with_children(std::move(cs));
    }
  }
}

FreshNames fresh_for(const Formula& f, const TermSubst& s) {
  FreshNames fresh(f);
  for (const auto& [k, t] : s) {
    fresh.reserve(k);
    std::set<std::string> vs;
    t.collect_variables(vs);
    for (auto& v : vs) fresh.reserve(v);
    std::set<std::pair<std::string, int>> fs;
    t.collect_functors(fs);
    for (auto& [n, a] : fs) fresh.reserve(n);
  }
  return fresh;
}

}  // namespace

Formula substitute_terms(const Formula& f, const TermSubst& subst) {
  if (subst.empty()) return f;
  auto fresh = fresh_for(f, subst);
  return subst_rec(f, subst, fresh);
}

Formula replace_term(const Formula& f, const Term& from, const Term& to) {
  switch (f.op()) {
    case Connective::Atom:
    case Connective::Equal:
    case Connective::MacroCall:
    case Connective::Apply: {
      std::vector<Term> ts;
      for (const auto& t : f.terms()) ts.push_back(t.replace(from, to));
      if (f.is(Connective::Atom)) return Formula::atom(f.name(), std::move(ts));
      if (f.is(Connective::Equal)) return Formula::equal(ts[0], ts[1]);
      if (f.is(Connective::MacroCall)) return Formula::macro_call(f.name(), std::move(ts));
      return Formula::apply(replace_term(f.body(), from, to), std::move(ts));
    }
    case Connective::Forall:
    case Connective::Exists:
    case Connective::Lambda: {
      std::set<std::string> fv;
      from.collect_variables(fv);
      for (const auto& v : f.vars())
        if (fv.contains(v)) return f;
      return f.with_body(replace_term(f.body(), from, to));
    }
    default: {
      if (f.children().empty()) return f;
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(replace_term(c, from, to));
      return f.with_children(std::move(cs));
    }
  }
}

namespace {

// Walks `f` substituting atoms of predicate `p`. `make_atom` builds the
// replacement for one atom's arguments; `free_vars`/`free_preds` are the
// symbols the replacement may introduce and which must not be captured.
Formula pred_subst(const Formula& f, const PredicateSpec& p,
                   const std::function<Formula(const std::vector<Term>&)>& make_atom,
                   const std::set<std::string>& free_vars, const std::set<std::string>& free_preds,
                   FreshNames& fresh) {
  switch (f.op()) {
    case Connective::Atom:
      if (f.name() == p.name && (!p.arity || *p.arity == static_cast<int>(f.terms().size())))
        return make_atom(f.terms());
      return f;
    case Connective::Forall:
    case Connective::Exists:
    case Connective::Lambda: {
      TermSubst ren;
      std::vector<std::string> vars;
      for (const auto& v : f.vars()) {
        if (free_vars.contains(v)) {
          auto nv = fresh.like(v);
          ren.insert_or_assign(v, Term::variable(nv));
          vars.push_back(nv);
        } else {
          vars.push_back(v);
        }
      }
      Formula body = ren.empty() ? f.body() : subst_rec(f.body(), ren, fresh);
      body = pred_subst(body, p, make_atom, free_vars, free_preds, fresh);
      if (f.is(Connective::Forall)) return Formula::forall(std::move(vars), std::move(body));
      if (f.is(Connective::Exists)) return Formula::exists(std::move(vars), std::move(body));
      return Formula::lambda(std::move(vars), std::move(body));
    }
    case Connective::Forall2:
    case Connective::Exists2: {
      for (const auto& q : f.preds())
        if (q.name == p.name) return f;
      std::vector<PredicateSpec> preds;
      Formula body = f.body();
      for (const auto& q : f.preds()) {
        if (free_preds.contains(q.name)) {
          auto nq = fresh.like(q.name);
          body = rename_predicate(body, q, nq);
          preds.push_back({nq, q.arity});
        } else {
          preds.push_back(q);
        }
      }
      body = pred_subst(body, p, make_atom, free_vars, free_preds, fresh);
      if (f.is(Connective::Forall2)) return Formula::forall2(std::move(preds), std::move(body));
      return Formula::exists2(std::move(preds), std::move(body));
    }
    default: {
      if (f.children().empty()) return f;
      std::vector<Formula> cs;
      cs.reserve(f.children().size());
      for (const auto& c : f.children()) cs.push_back(pred_subst(c, p, make_atom, free_vars, free_preds, fresh));
      return f.with_children(std::move(cs));
    }
  }
}

}  // namespace

Formula rename_predicate(const Formula& f, const PredicateSpec& p, const std::string& replacement) {
  FreshNames fresh(f);
  fresh.reserve(replacement);
  return pred_subst(
      f, p, [&](const std::vector<Term>& args) { return Formula::atom(replacement, args); }, {}, {replacement},
      fresh);
}

Formula substitute_predicate(const Formula& f, const PredicateSpec& p, const Formula& lambda) {
  if (!lambda.is(Connective::Lambda)) return rename_predicate(f, p, lambda.name());
  const auto& params = lambda.vars();
  if (p.arity && *p.arity != static_cast<int>(params.size()))
    throw ArityError("predicate " + p.name + "/" + std::to_string(*p.arity) + " replaced by λ of arity " +
                     std::to_string(params.size()));
  for (const auto& [name, arities] : predicate_arities(f)) {
    if (name != p.name) continue;
    for (int a : arities)
      if (a != static_cast<int>(params.size()))
        throw ArityError("predicate " + p.name + " used with arity " + std::to_string(a) + " but λ has " +
                         std::to_string(params.size()) + " parameters");
  }
  std::set<std::string> fv;
  for (auto& v : free_variables(lambda)) fv.insert(v);
  std::set<std::string> fp;
  for (const auto& o : free_symbols(lambda))
    if (o.kind == PolarityOccurrence::Kind::Predicate) fp.insert(o.symbol);
  FreshNames fresh(f);
  fresh.reserve(lambda);
  const Formula body = lambda.body();
  return pred_subst(
      f, {p.name, static_cast<int>(params.size())},
      [&](const std::vector<Term>& args) {
        TermSubst s;
        for (std::size_t i = 0; i < params.size(); ++i) s.emplace(params[i], args[i]);
        return substitute_terms(body, s);
      },
      fv, fp, fresh);
}

Formula beta_reduce(const Formula& f) {
  if (f.is(Connective::Apply)) {
    Formula head = beta_reduce(f.body());
    if (!head.is(Connective::Lambda)) return Formula::apply(head, f.terms());
    if (head.vars().size() != f.terms().size())
      throw ArityError("λ with " + std::to_string(head.vars().size()) + " parameters applied to " +
                       std::to_string(f.terms().size()) + " arguments");
    TermSubst s;
    for (std::size_t i = 0; i < head.vars().size(); ++i) s.emplace(head.vars()[i], f.terms()[i]);
    return beta_reduce(substitute_terms(head.body(), s));
  }
  if (f.children().empty()) return f;
  std::vector<Formula> cs;
  cs.reserve(f.children().size());
  bool changed = false;
  for (const auto& c : f.children()) {
    cs.push_back(beta_reduce(c));
    changed = changed || !(cs.back() == c);
  }
  return changed ? f.with_children(std::move(cs)) : f;
}

namespace {

Formula nnf_rec(const Formula& f, bool pos) {
  using C = Connective;
  auto neg_all = [&](bool p) {
    std::vector<Formula> cs;
    cs.reserve(f.children().size());
    for (const auto& c : f.children()) cs.push_back(nnf_rec(c, p));
    return cs;
  };
  switch (f.op()) {
    case C::Atom:
    case C::Equal:
    case C::MacroCall:
      return pos ? f : Formula::negation(f);
    case C::True:
      return pos ? f : Formula::falsity();
    case C::False:
      return pos ? f : Formula::truth();
    case C::Not:
      return nnf_rec(f.body(), !pos);
    case C::And:
      return pos ? Formula::conjunction(neg_all(true)) : Formula::disjunction(neg_all(false));
    case C::Or:
      return pos ? Formula::disjunction(neg_all(true)) : Formula::conjunction(neg_all(false));
    case C::Implies:
      if (pos) return Formula::disjunction({nnf_rec(f.lhs(), false), nnf_rec(f.rhs(), true)});
      return Formula::conjunction({nnf_rec(f.lhs(), true), nnf_rec(f.rhs(), false)});
    case C::Iff: {
      auto a = nnf_rec(f.lhs(), true), na = nnf_rec(f.lhs(), false);
      auto b = nnf_rec(f.rhs(), true), nb = nnf_rec(f.rhs(), false);
      if (pos) return Formula::conjunction({Formula::disjunction({na, b}), Formula::disjunction({nb, a})});
      return Formula::disjunction({Formula::conjunction({a, nb}), Formula::conjunction({b, na})});
    }
    case C::Forall:
      return pos ? Formula::forall(f.vars(), nnf_rec(f.body(), true))
                 : Formula::exists(f.vars(), nnf_rec(f.body(), false));
    case C::Exists:
      return pos ? Formula::exists(f.vars(), nnf_rec(f.body(), true))
                 : Formula::forall(f.vars(), nnf_rec(f.body(), false));
    case C::Forall2:
      return pos ? Formula::forall2(f.preds(), nnf_rec(f.body(), true))
                 : Formula::exists2(f.preds(), nnf_rec(f.body(), false));
    case C::Exists2:
      return pos ? Formula::exists2(f.preds(), nnf_rec(f.body(), true))
                 : Formula::forall2(f.preds(), nnf_rec(f.body(), false));
    case C::Lambda:
      return Formula::lambda(f.vars(), nnf_rec(f.body(), true));
    case C::Apply: {
      auto r = beta_reduce(f);
      if (!r.is(C::Apply)) return nnf_rec(r, pos);
      return pos ? r : Formula::negation(r);
    }
  }
  return f;
}

Formula rename_bound_rec(const Formula& f, const TermSubst& env, std::set<std::string>& taken, FreshNames& gen) {
  using C = Connective;
  switch (f.op()) {
    case C::Atom:
    case C::Equal:
    case C::MacroCall:
      return env.empty() ? f : subst_rec(f, env, gen);
    case C::Apply: {
      std::vector<Term> ts;
      for (const auto& t : f.terms()) ts.push_back(t.substitute(env));
      return Formula::apply(rename_bound_rec(f.body(), env, taken, gen), std::move(ts));
    }
    case C::Forall:
    case C::Exists:
    case C::Lambda: {
      TermSubst inner = env;
      std::vector<std::string> vars;
      for (const auto& v : f.vars()) {
        std::string nv = taken.contains(v) ? gen.like(v) : v;
        taken.insert(nv);
        gen.reserve(nv);
        if (nv != v) {
          inner.insert_or_assign(v, Term::variable(nv));
        } else {
          inner.erase(v);
        }
        vars.push_back(nv);
      }
      auto body = rename_bound_rec(f.body(), inner, taken, gen);
      if (f.is(C::Forall)) return Formula::forall(std::move(vars), std::move(body));
      if (f.is(C::Exists)) return Formula::exists(std::move(vars), std::move(body));
      return Formula::lambda(std::move(vars), std::move(body));
    }
    default: {
      if (f.children().empty()) return f;
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(rename_bound_rec(c, env, taken, gen));
      return f.with_children(std::move(cs));
    }
  }
}

Formula tidy_rec(const Formula& f, const std::set<std::string>& fixed, std::set<std::string>& scope) {
  using C = Connective;
  if (f.is(C::Forall) || f.is(C::Exists)) {
    static const char* preferred[] = {"x", "y", "z", "u", "v", "w"};
    Formula body = f.body();
    std::vector<std::string> vars;
    std::vector<std::string> added;
    for (const auto& v : f.vars()) {
      auto names = all_names(body);
      names.erase(v);
      auto free = [&](const std::string& n) {
        return !fixed.contains(n) && !scope.contains(n) && !names.contains(n) &&
               std::find(vars.begin(), vars.end(), n) == vars.end();
      };
      std::string base = v;
      while (base.size() > 1 && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
      std::string pick;
      if (free(base)) pick = base;
      for (const char* c : preferred)
        if (pick.empty() && free(c)) pick = c;
      if (pick.empty()) pick = v;
      if (pick != v) body = substitute_terms(body, {{v, Term::variable(pick)}});
      vars.push_back(pick);
    }
    for (const auto& v : vars)
      if (scope.insert(v).second) added.push_back(v);
    body = tidy_rec(body, fixed, scope);
    for (const auto& v : added) scope.erase(v);
    return f.is(C::Forall) ? Formula::forall(std::move(vars), std::move(body))
                           : Formula::exists(std::move(vars), std::move(body));
  }
  if (f.children().empty()) return f;
  std::vector<Formula> cs;
  for (const auto& c : f.children()) cs.push_back(tidy_rec(c, fixed, scope));
  return f.with_children(std::move(cs));
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_rec(f, true); }

Formula rename_bound(const Formula& f) {
  FreshNames gen(f);
  return rename_bound(f, gen);
}

Formula rename_bound(const Formula& f, FreshNames& names) {
  names.reserve(f);
  std::set<std::string> taken;
  for (const auto& o : free_symbols(f)) taken.insert(o.symbol);
  for (const auto& v : free_variables(f)) taken.insert(v);
  return rename_bound_rec(f, {}, taken, names);
}

Formula tidy_variables(const Formula& f) {
  std::set<std::string> fixed;
  for (const auto& o : free_symbols(f)) fixed.insert(o.symbol);
  for (const auto& v : free_variables(f)) fixed.insert(v);
  std::set<std::string> scope;
  return tidy_rec(f, fixed, scope);
}

Formula simplify_constants(const Formula& f) {
  using C = Connective;
  switch (f.op()) {
    case C::And: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) {
        auto s = simplify_constants(c);
        if (s.is(C::False)) return s;
        if (!s.is(C::True)) cs.push_back(std::move(s));
      }
      return Formula::conjunction(std::move(cs));
    }
    case C::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) {
        auto s = simplify_constants(c);
        if (s.is(C::True)) return s;
        if (!s.is(C::False)) cs.push_back(std::move(s));
      }
      return Formula::disjunction(std::move(cs));
    }
    case C::Not: {
      auto b = simplify_constants(f.body());
      if (b.is(C::True)) return Formula::falsity();
      if (b.is(C::False)) return Formula::truth();
      return Formula::negation(b);
    }
    case C::Implies: {
      auto a = simplify_constants(f.lhs());
      auto b = simplify_constants(f.rhs());
      if (a.is(C::False) || b.is(C::True)) return Formula::truth();
      if (a.is(C::True)) return b;
      if (b.is(C::False)) return Formula::negation(a);
      return Formula::implies(a, b);
    }
    case C::Iff: {
      auto a = simplify_constants(f.lhs());
      auto b = simplify_constants(f.rhs());
      if (a.is(C::True)) return b;
      if (b.is(C::True)) return a;
      if (a.is(C::False)) return simplify_constants(Formula::negation(b));
      if (b.is(C::False)) return simplify_constants(Formula::negation(a));
      return Formula::iff(a, b);
    }
    case C::Forall:
    case C::Exists:
    case C::Forall2:
    case C::Exists2: {
      auto b = simplify_constants(f.body());
      if (b.is(C::True) || b.is(C::False)) return b;
      return f.with_body(b);
    }
    case C::Lambda:
      return f.with_body(simplify_constants(f.body()));
    default:
      return f;
  }
}

Formula universal_closure(const Formula& f) {
  auto fv = free_variables(f);
  return Formula::forall({fv.begin(), fv.end()}, f);
}

}  // namespace pie
