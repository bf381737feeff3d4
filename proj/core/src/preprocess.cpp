#include "pie/preprocess.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "pie/error.hpp"

namespace pie {

namespace {

using C = Connective;

std::set<std::string> fv(const Formula& f) { return free_variables(f); }

Formula push_forall(const std::string& v, const Formula& g);
Formula push_exists(const std::string& v, const Formula& g);

// Splits the operands of an n-ary node by whether `v` occurs free.
std::pair<std::vector<Formula>, std::vector<Formula>> split_by(const std::string& v, const Formula& g) {
  std::vector<Formula> with, without;
  for (const auto& c : g.children()) (fv(c).contains(v) ? with : without).push_back(c);
  return {with, without};
}

Formula push_forall(const std::string& v, const Formula& g) {
  if (!fv(g).contains(v)) return g;
  if (g.is(C::And)) {
    std::vector<Formula> cs;
    for (const auto& c : g.children()) cs.push_back(push_forall(v, c));
    return Formula::conjunction(std::move(cs));
  }
  if (g.is(C::Or)) {
    auto [with, without] = split_by(v, g);
    if (!without.empty()) {
      without.push_back(push_forall(v, Formula::disjunction(with)));
      return Formula::disjunction(std::move(without));
    }
  }
  return Formula::forall({v}, g);
}

Formula push_exists(const std::string& v, const Formula& g) {
  if (!fv(g).contains(v)) return g;
  if (g.is(C::Or)) {
    std::vector<Formula> cs;
    for (const auto& c : g.children()) cs.push_back(push_exists(v, c));
    return Formula::disjunction(std::move(cs));
  }
  if (g.is(C::And)) {
    auto [with, without] = split_by(v, g);
    if (!without.empty()) {
      without.push_back(push_exists(v, Formula::conjunction(with)));
      return Formula::conjunction(std::move(without));
    }
  }
  return Formula::exists({v}, g);
}

// Expects NNF with pairwise distinct bound variables.
Formula miniscope(const Formula& f) {
  switch (f.op()) {
    case C::And:
    case C::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(miniscope(c));
      return f.with_children(std::move(cs));
    }
    case C::Forall:
    case C::Exists: {
      Formula body = miniscope(f.body());
      for (auto it = f.vars().rbegin(); it != f.vars().rend(); ++it)
        body = f.is(C::Forall) ? push_forall(*it, body) : push_exists(*it, body);
      return body;
    }
    default:
      return f;
  }
}

struct Clausifier {
  ClausifyMode mode;
  FreshNames& names;
  ClausalForm out;

  Formula skolemize(const Formula& f, const std::vector<std::string>& universals) {
    switch (f.op()) {
      case C::And:
      case C::Or: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(skolemize(c, universals));
        return f.with_children(std::move(cs));
      }
      case C::Forall: {
        auto u = universals;
        u.insert(u.end(), f.vars().begin(), f.vars().end());
        return skolemize(f.body(), u);
      }
      case C::Exists: {
        auto free = fv(f);
        std::vector<std::string> deps;
        for (const auto& u : universals)
          if (free.contains(u)) deps.push_back(u);
        std::vector<Term> args;
        for (const auto& d : deps) args.push_back(Term::variable(d));
        TermSubst s;
        for (const auto& v : f.vars()) {
          auto name = names.skolem();
          out.skolems.push_back({name, static_cast<int>(deps.size()), deps, v});
          s.emplace(v, Term::compound(name, args));
        }
        return skolemize(substitute_terms(f.body(), s), universals);
      }
      default:
        return f;
    }
  }

  using Cnf = std::vector<std::vector<Literal>>;

  static bool tautology(const std::vector<Literal>& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i].is_equality() && c[i].positive && c[i].args[0] == c[i].args[1]) return true;
      for (std::size_t j = i + 1; j < c.size(); ++j)
        if (c[i].positive != c[j].positive && c[i].predicate == c[j].predicate && c[i].args == c[j].args) return true;
    }
    return false;
  }

  static void add_unique(std::vector<Literal>& c, const Literal& l) {
    if (std::find(c.begin(), c.end(), l) == c.end()) c.push_back(l);
  }

  Cnf define(const Formula& f, const Cnf& body) {
    auto vars = fv(f);
    std::vector<Term> args;
    for (const auto& v : vars) args.push_back(Term::variable(v));
    auto name = names.like("def");
    out.definitions.insert(name);
    Literal d{true, name, args};
    // Only d → f is needed: f occurs positively after NNF.
    for (const auto& c : body) {
      std::vector<Literal> cl{d.negated()};
      for (const auto& l : c) add_unique(cl, l);
      if (!tautology(cl)) out.clauses.push_back({cl, std::nullopt});
    }
    return {{d}};
  }

  Cnf cnf(const Formula& f) {
    switch (f.op()) {
      case C::True:
        return {};
      case C::False:
        return {{}};
      case C::And: {
        Cnf r;
        for (const auto& c : f.children())
          for (auto& cl : cnf(c)) r.push_back(std::move(cl));
        return r;
      }
      case C::Or: {
        std::vector<Cnf> parts;
        std::size_t product = 1, sum = 0;
        for (const auto& c : f.children()) {
          parts.push_back(cnf(c));
          product *= std::max<std::size_t>(parts.back().size(), 1);
          sum += parts.back().size();
        }
        if (mode == ClausifyMode::Definitional && product > sum + 1) {
          for (std::size_t i = 0; i < parts.size(); ++i)
            if (parts[i].size() > 1) parts[i] = define(f.children()[i], parts[i]);
        }
        Cnf r{{}};
        for (const auto& p : parts) {
          Cnf next;
          for (const auto& a : r)
            for (const auto& b : p) {
              auto c = a;
              for (const auto& l : b) add_unique(c, l);
              if (!tautology(c)) next.push_back(std::move(c));
            }
          r = std::move(next);
        }
        return r;
      }
      default:
        if (f.is_literal()) return {{formula_literal(f)}};
        throw FragmentError("clausify: unexpected formula after normalization");
    }
  }
};

}  // namespace

ClausalForm clausify(const Formula& f, ClausifyMode mode) {
  FreshNames names(f);
  return clausify(f, mode, names);
}

ClausalForm clausify(const Formula& f, ClausifyMode mode, FreshNames& names) {
  if (!is_first_order(f)) throw FragmentError("clausify needs a first-order formula");
  names.reserve(f);
  Formula g = rename_bound(nnf(simplify_constants(f)), names);
  g = miniscope(g);
  Clausifier cl{mode, names, {}};
  g = cl.skolemize(g, {});
  std::vector<Clause> defs = std::move(cl.out.clauses);
  cl.out.clauses.clear();
  for (auto& c : cl.cnf(g))
    if (!Clausifier::tautology(c)) cl.out.clauses.push_back({std::move(c), std::nullopt});
  for (auto& c : cl.out.clauses) defs.push_back(std::move(c));
  cl.out.clauses = std::move(defs);
  for (std::size_t i = 0; i < cl.out.clauses.size(); ++i) cl.out.clauses[i].origin = static_cast<int>(i);
  return cl.out;
}

bool match_term(const Term& p, const Term& t, TermSubst& s) {
  if (p.is_variable()) {
    auto it = s.find(p.name());
    if (it == s.end()) {
      s.emplace(p.name(), t);
      return true;
    }
    return it->second == t;
  }
  if (!t.is_compound() || p.name() != t.name() || p.arity() != t.arity()) return false;
  for (std::size_t i = 0; i < p.arity(); ++i)
    if (!match_term(p.args()[i], t.args()[i], s)) return false;
  return true;
}

bool match_literal(const Literal& p, const Literal& t, TermSubst& s) {
  if (p.positive != t.positive || p.predicate != t.predicate || p.args.size() != t.args.size()) return false;
  TermSubst trial = s;
  for (std::size_t i = 0; i < p.args.size(); ++i)
    if (!match_term(p.args[i], t.args[i], trial)) return false;
  s = std::move(trial);
  return true;
}

namespace {

bool subsume_from(const std::vector<Literal>& c, std::size_t i, const std::vector<Literal>& d, TermSubst& s) {
  if (i == c.size()) return true;
  for (const auto& l : d) {
    TermSubst trial = s;
    if (match_literal(c[i], l, trial) && subsume_from(c, i + 1, d, trial)) {
      s = std::move(trial);
      return true;
    }
  }
  return false;
}

bool same_literals(const Clause& a, const Clause& b) {
  if (a.literals.size() != b.literals.size()) return false;
  auto x = a.literals, y = b.literals;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

constexpr std::size_t kSubsumptionCap = 12;

std::optional<Clause> normalize(Clause c) {
  for (bool again = true; again;) {
    again = false;
    for (std::size_t i = 0; i < c.literals.size(); ++i) {
      const Literal& l = c.literals[i];
      if (!l.is_equality() || l.positive) continue;
      for (int side = 0; side < 2; ++side) {
        const Term& x = l.args[side];
        const Term& t = l.args[1 - side];
        if (!x.is_variable() || t.contains_variable(x.name())) continue;
        TermSubst s{{x.name(), t}};
        std::vector<Literal> rest;
        for (std::size_t j = 0; j < c.literals.size(); ++j)
          if (j != i) rest.push_back(c.literals[j].substitute(s));
        c.literals = std::move(rest);
        again = true;
        break;
      }
      if (again) break;
    }
  }
  std::vector<Literal> lits;
  for (const auto& l : c.literals) {
    if (l.is_equality() && l.args[0] == l.args[1]) {
      if (l.positive) return std::nullopt;
      continue;
    }
    if (std::find(lits.begin(), lits.end(), l) == lits.end()) lits.push_back(l);
  }
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (std::size_t j = i + 1; j < lits.size(); ++j)
      if (lits[i].positive != lits[j].positive && lits[i].predicate == lits[j].predicate && lits[i].args == lits[j].args)
        return std::nullopt;
  c.literals = std::move(lits);
  return c;
}

// Removes from `d` a literal resolvable against `c` whose remaining literals
// all map into `d`.
bool strengthen(const Clause& c, Clause& d) {
  if (c.literals.size() > d.literals.size() || d.literals.size() > kSubsumptionCap) return false;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    std::vector<Literal> flipped = c.literals;
    flipped[i] = flipped[i].negated();
    // Put the flipped literal first so its match is fixed before the rest.
    std::swap(flipped[0], flipped[i]);
    for (std::size_t k = 0; k < d.literals.size(); ++k) {
      TermSubst s;
      if (!match_literal(flipped[0], d.literals[k], s)) continue;
      std::vector<Literal> rest(flipped.begin() + 1, flipped.end());
      std::vector<Literal> others;
      for (std::size_t m = 0; m < d.literals.size(); ++m)
        if (m != k) others.push_back(d.literals[m]);
      if (subsume_from(rest, 0, others, s)) {
        d.literals = std::move(others);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

bool subsumes(const Clause& c, const Clause& d) {
  if (d.literals.size() > kSubsumptionCap) return same_literals(c, d);
  TermSubst s;
  return subsume_from(c.literals, 0, d.literals, s);
}

ClausalForm simplify_clausal(const ClausalForm& cf, const ProtectedVocabulary& protect) {
  ClausalForm out = cf;
  std::vector<Clause> cs;
  for (const auto& c : cf.clauses)
    if (auto n = normalize(c)) cs.push_back(std::move(*n));

  for (int round = 0; round < 64; ++round) {
    bool changed = false;
    for (const auto& c : cs)
      if (c.empty()) {
        out.clauses = {c};
        return out;
      }
    // Subsumption.
    std::vector<bool> dead(cs.size(), false);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (dead[i]) continue;
      for (std::size_t j = 0; j < cs.size(); ++j) {
        if (i == j || dead[j]) continue;
        if (subsumes(cs[i], cs[j])) {
          // Of two variants, keep the earlier one.
          if (j < i && subsumes(cs[j], cs[i])) continue;
          dead[j] = true;
          changed = true;
        }
      }
    }
    std::vector<Clause> kept;
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (!dead[i]) kept.push_back(std::move(cs[i]));
    cs = std::move(kept);
    // Subsumption resolution, with unit simplification as the common case.
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j) {
        if (i == j) continue;
        while (strengthen(cs[i], cs[j])) changed = true;
      }
    // Purity.
    std::map<std::string, int> polarity;
    for (const auto& c : cs)
      for (const auto& l : c.literals) polarity[l.predicate] |= l.positive ? 1 : 2;
    std::set<std::string> pure;
    for (const auto& [p, mask] : polarity)
      if (mask != 3 && !protect.contains(p)) pure.insert(p);
    if (!pure.empty()) {
      std::vector<Clause> rest;
      for (auto& c : cs) {
        bool has = std::any_of(c.literals.begin(), c.literals.end(),
                               [&](const Literal& l) { return pure.contains(l.predicate); });
        if (has)
          changed = true;
        else
          rest.push_back(std::move(c));
      }
      cs = std::move(rest);
    }
    std::vector<Clause> normal;
    for (auto& c : cs)
      if (auto n = normalize(c)) normal.push_back(std::move(*n));
    if (normal.size() != cs.size()) changed = true;
    cs = std::move(normal);
    if (!changed) break;
  }
  out.clauses = std::move(cs);
  for (const auto& c : out.clauses)
    if (c.empty()) {
      out.clauses = {c};
      break;
    }
  std::set<std::string> used;
  for (const auto& c : out.clauses)
    for (const auto& l : c.literals) {
      used.insert(l.predicate);
      std::set<std::pair<std::string, int>> fs;
      for (const auto& a : l.args) a.collect_functors(fs);
      for (const auto& [n, a] : fs) used.insert(n);
    }
  std::erase_if(out.skolems, [&](const SkolemSymbol& s) { return !used.contains(s.name); });
  std::erase_if(out.definitions, [&](const std::string& d) { return !used.contains(d); });
  return out;
}

namespace {

bool skolem_like(const std::string& n) {
  return n.size() > 2 && n.starts_with("sk") &&
         std::all_of(n.begin() + 2, n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

void collect_skolem_terms(const Term& t, const std::set<std::string>& sk, std::vector<Term>& out) {
  if (t.is_variable()) return;
  if (sk.contains(t.name())) {
    out.push_back(t);
    return;
  }
  for (const auto& a : t.args()) collect_skolem_terms(a, sk, out);
}

Term replace_skolems(const Term& t, const std::map<std::string, std::string>& exvar) {
  if (t.is_variable()) return t;
  if (auto it = exvar.find(t.name()); it != exvar.end()) return Term::variable(it->second);
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(replace_skolems(a, exvar));
  return Term::compound(t.name(), std::move(args));
}

// Quantifies `v` over the conjuncts that mention it. Disjunctions are left
// alone so clause shapes survive.
Formula scope_over_and(bool universal, const std::string& v, const Formula& g) {
  if (!fv(g).contains(v)) return g;
  if (g.is(C::And)) {
    auto [with, without] = split_by(v, g);
    if (universal) {
      std::vector<Formula> ordered;
      for (const auto& c : g.children()) ordered.push_back(fv(c).contains(v) ? scope_over_and(true, v, c) : c);
      return Formula::conjunction(std::move(ordered));
    }
    if (!without.empty()) {
      Formula inner = scope_over_and(false, v, Formula::conjunction(with));
      std::vector<Formula> ordered;
      bool placed = false;
      for (const auto& c : g.children()) {
        if (!fv(c).contains(v))
          ordered.push_back(c);
        else if (!placed) {
          ordered.push_back(inner);
          placed = true;
        }
      }
      return Formula::conjunction(std::move(ordered));
    }
  }
  return universal ? Formula::forall({v}, g) : Formula::exists({v}, g);
}

}  // namespace

Formula unskolemize(const ClausalForm& cf) {
  std::map<std::string, SkolemSymbol> skolems;
  for (const auto& s : cf.skolems) skolems.emplace(s.name, s);

  FreshNames names;
  for (const auto& c : cf.clauses)
    for (const auto& l : c.literals) {
      names.reserve(l.predicate);
      std::set<std::string> vs;
      l.collect_variables(vs);
      for (const auto& v : vs) names.reserve(v);
      std::set<std::pair<std::string, int>> fs;
      for (const auto& a : l.args) a.collect_functors(fs);
      for (const auto& [n, a] : fs) {
        names.reserve(n);
        if (!skolems.contains(n) && skolem_like(n)) skolems.emplace(n, SkolemSymbol{n, a, {}, {}});
      }
    }
  // Unrecorded Skolem functions get synthesized dependency names.
  for (auto& [n, s] : skolems)
    if (static_cast<int>(s.dependencies.size()) != s.arity) {
      s.dependencies.clear();
      for (int i = 0; i < s.arity; ++i) s.dependencies.push_back(names.like("x"));
    }

  std::set<std::string> sk_names;
  std::set<std::string> present;
  for (const auto& [n, s] : skolems) sk_names.insert(n);

  // Canonical universal variables: the dependency names.
  std::set<std::string> canonical;
  for (const auto& [n, s] : skolems)
    for (const auto& d : s.dependencies) canonical.insert(d);

  std::vector<Formula> clause_formulas;
  for (const auto& c : cf.clauses) {
    std::vector<Term> occ;
    for (const auto& l : c.literals)
      for (const auto& a : l.args) collect_skolem_terms(a, sk_names, occ);
    std::map<std::string, std::string> to_canonical;
    std::map<std::string, std::string> from_canonical;
    for (const auto& t : occ) {
      const auto& s = skolems.at(t.name());
      present.insert(t.name());
      for (std::size_t i = 0; i < t.arity(); ++i) {
        const Term& a = t.args()[i];
        if (!a.is_variable()) throw UnskolemizeError("Skolem term " + t.name() + " with a non-variable argument");
        const auto& d = s.dependencies[i];
        auto [it, ins] = to_canonical.emplace(a.name(), d);
        if (!ins && it->second != d) throw UnskolemizeError("inconsistent Skolem arguments for " + t.name());
        auto [jt, jns] = from_canonical.emplace(d, a.name());
        if (!jns && jt->second != a.name()) throw UnskolemizeError("Skolem arguments of " + t.name() + " not injective");
      }
    }
    TermSubst ren;
    std::set<std::string> cvars = c.variables();
    std::vector<std::string> local;
    for (const auto& v : cvars) {
      if (auto it = to_canonical.find(v); it != to_canonical.end()) {
        if (it->second != v) ren.emplace(v, Term::variable(it->second));
      } else if (canonical.contains(v)) {
        auto nv = names.like(v);
        ren.emplace(v, Term::variable(nv));
        local.push_back(nv);
      } else {
        local.push_back(v);
      }
    }
    Clause renamed;
    for (const auto& l : c.literals) renamed.literals.push_back(l.substitute(ren));
    clause_formulas.push_back(Formula::forall(local, clause_matrix(renamed)));
  }

  // Existential variable per Skolem symbol.
  std::vector<const SkolemSymbol*> order;
  for (const auto& [n, s] : skolems)
    if (present.contains(n)) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [&](const SkolemSymbol* a, const SkolemSymbol* b) {
    if (a->dependencies.size() != b->dependencies.size()) return a->dependencies.size() < b->dependencies.size();
    auto ia = std::find_if(cf.skolems.begin(), cf.skolems.end(), [&](const SkolemSymbol& s) { return s.name == a->name; });
    auto ib = std::find_if(cf.skolems.begin(), cf.skolems.end(), [&](const SkolemSymbol& s) { return s.name == b->name; });
    return ia < ib;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& prev = order[i - 1]->dependencies;
    const auto& cur = order[i]->dependencies;
    std::set<std::string> p(prev.begin(), prev.end()), q(cur.begin(), cur.end());
    if (!std::includes(q.begin(), q.end(), p.begin(), p.end()))
      throw UnskolemizeError("Skolem dependencies do not form a chain");
  }
  std::map<std::string, std::string> exvar;
  for (const auto* s : order) {
    std::string v = s->variable.empty() ? names.like("x") : s->variable;
    if (!s->variable.empty()) {
      if (names.used(v) && !canonical.contains(v)) {
        // Still free to take when no clause uses it.
      }
      bool clash = canonical.contains(v) ||
                   std::any_of(exvar.begin(), exvar.end(), [&](const auto& kv) { return kv.second == v; });
      for (const auto& c : cf.clauses)
        if (c.variables().contains(v)) clash = true;
      if (clash) v = names.like(v);
      names.reserve(v);
    }
    exvar.emplace(s->name, v);
  }

  std::vector<Formula> matrix;
  for (const auto& f : clause_formulas) {
    // Skolem terms become their existential variables.
    std::function<Formula(const Formula&)> rep = [&](const Formula& g) -> Formula {
      if (g.is(C::Atom) || g.is(C::Equal)) {
        std::vector<Term> ts;
        for (const auto& t : g.terms()) ts.push_back(replace_skolems(t, exvar));
        return g.is(C::Atom) ? Formula::atom(g.name(), std::move(ts)) : Formula::equal(ts[0], ts[1]);
      }
      if (g.children().empty()) return g;
      std::vector<Formula> cs;
      for (const auto& c : g.children()) cs.push_back(rep(c));
      return g.with_children(std::move(cs));
    };
    matrix.push_back(rep(f));
  }
  Formula result = Formula::conjunction(std::move(matrix));

  // Prefix from the inside out.
  std::vector<std::pair<bool, std::string>> prefix;  // (universal, name)
  std::set<std::string> introduced;
  for (const auto* s : order) {
    for (const auto& d : s->dependencies)
      if (introduced.insert(d).second) prefix.emplace_back(true, d);
    prefix.emplace_back(false, exvar.at(s->name));
  }
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    if (!free_variables(result).contains(it->second)) continue;
    result = scope_over_and(it->first, it->second, result);
  }
  return result;
}

namespace {

Formula reform_clause(const Formula& f) {
  std::vector<Formula> neg, pos;
  for (const auto& c : f.children()) {
    if (c.is(C::Not))
      neg.push_back(c.body());
    else
      pos.push_back(c);
  }
  if (neg.empty()) return f;
  if (pos.empty()) return Formula::negation(Formula::conjunction(std::move(neg)));
  return Formula::implies(Formula::conjunction(std::move(neg)), Formula::disjunction(std::move(pos)));
}

bool is_clause_shape(const Formula& f) {
  return f.is(C::Or) && std::all_of(f.children().begin(), f.children().end(), [](const Formula& c) { return c.is_literal(); });
}

// Substitutes `x := t` when safe, for the one-point rule.
bool one_point_candidate(const Formula& lit, const std::string& x, Term& t) {
  if (!lit.is(C::Equal)) return false;
  for (int side = 0; side < 2; ++side) {
    const Term& a = lit.terms()[side];
    const Term& b = lit.terms()[1 - side];
    if (a.is_variable() && a.name() == x && !b.contains_variable(x)) {
      t = b;
      return true;
    }
  }
  return false;
}

// Replaces literal `lit` (and its complement) inside `f` by a truth value.
// Stops below binders that capture a variable of `lit`.
Formula assume(const Formula& f, const Formula& lit, bool value, const std::set<std::string>& lit_vars) {
  Formula atom = lit.is(C::Not) ? lit.body() : lit;
  bool atom_value = lit.is(C::Not) ? !value : value;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (g == atom) return atom_value ? Formula::truth() : Formula::falsity();
    switch (g.op()) {
      case C::Forall:
      case C::Exists:
      case C::Lambda:
        for (const auto& v : g.vars())
          if (lit_vars.contains(v)) return g;
        return g.with_body(go(g.body()));
      case C::Atom:
      case C::Equal:
      case C::True:
      case C::False:
      case C::MacroCall:
        return g;
      default: {
        std::vector<Formula> cs;
        for (const auto& c : g.children()) cs.push_back(go(c));
        return g.with_children(std::move(cs));
      }
    }
  };
  return go(f);
}

Formula simp(const Formula& f);

bool same_up_to_order(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a.op() != b.op() || !(a.is(C::And) || a.is(C::Or)) || a.children().size() != b.children().size()) return false;
  auto x = a.children(), y = b.children();
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

Formula simp_junction(const Formula& f) {
  bool conj = f.is(C::And);
  std::vector<Formula> cs;
  for (const auto& c : f.children()) {
    Formula s = simp(c);
    if (s.is(conj ? C::False : C::True)) return s;
    if (s.is(conj ? C::True : C::False)) continue;
    if (std::any_of(cs.begin(), cs.end(), [&](const Formula& c) { return same_up_to_order(c, s); })) continue;
    cs.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (cs[j].is(C::Not) && cs[j].body() == cs[i]) return conj ? Formula::falsity() : Formula::truth();
  // Literal operands fix their truth value inside the siblings.
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!cs[i].is_literal()) continue;
    std::set<std::string> vs = free_variables(cs[i]);
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (i == j || cs[j].is_literal()) continue;
      Formula r = assume(cs[j], cs[i], conj, vs);
      if (!(r == cs[j])) cs[j] = simp(r);
    }
  }
  Formula out = conj ? Formula::conjunction(cs) : Formula::disjunction(cs);
  if (out.is(conj ? C::And : C::Or)) {
    for (const auto& c : out.children())
      if (c.is(conj ? C::False : C::True)) return c;
    std::vector<Formula> rest;
    for (const auto& c : out.children())
      if (!c.is(conj ? C::True : C::False)) rest.push_back(c);
    return conj ? Formula::conjunction(rest) : Formula::disjunction(rest);
  }
  return out;
}

Formula simp_quantifier(const Formula& f) {
  bool universal = f.is(C::Forall);
  Formula body = simp(f.body());
  std::vector<std::string> vars;
  auto free = free_variables(body);
  for (const auto& v : f.vars())
    if (free.contains(v)) vars.push_back(v);
  // One-point rule.
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const auto& x = vars[k];
    Term t = Term::constant("_");
    std::optional<Formula> rest;
    if (universal) {
      if (body.is(C::Or)) {
        for (std::size_t i = 0; i < body.children().size() && !rest; ++i) {
          const Formula& c = body.children()[i];
          if (c.is(C::Not) && one_point_candidate(c.body(), x, t)) {
            std::vector<Formula> others;
            for (std::size_t j = 0; j < body.children().size(); ++j)
              if (j != i) others.push_back(body.children()[j]);
            rest = Formula::disjunction(std::move(others));
          }
        }
      } else if (body.is(C::Implies)) {
        const Formula& lhs = body.lhs();
        if (one_point_candidate(lhs, x, t)) {
          rest = body.rhs();
        } else if (lhs.is(C::And)) {
          for (std::size_t i = 0; i < lhs.children().size() && !rest; ++i)
            if (one_point_candidate(lhs.children()[i], x, t)) {
              std::vector<Formula> others;
              for (std::size_t j = 0; j < lhs.children().size(); ++j)
                if (j != i) others.push_back(lhs.children()[j]);
              rest = Formula::implies(Formula::conjunction(std::move(others)), body.rhs());
            }
        }
      } else if (body.is(C::Not) && one_point_candidate(body.body(), x, t)) {
        rest = Formula::falsity();
      }
    } else {
      if (body.is(C::And)) {
        for (std::size_t i = 0; i < body.children().size() && !rest; ++i)
          if (one_point_candidate(body.children()[i], x, t)) {
            std::vector<Formula> others;
            for (std::size_t j = 0; j < body.children().size(); ++j)
              if (j != i) others.push_back(body.children()[j]);
            rest = Formula::conjunction(std::move(others));
          }
      } else if (one_point_candidate(body, x, t)) {
        rest = Formula::truth();
      }
    }
    if (!rest) continue;
    // Other variables of the block stay bound around the substituted body.
    std::vector<std::string> others;
    for (const auto& v : vars)
      if (v != x) others.push_back(v);
    Formula g = substitute_terms(*rest, {{x, t}});
    Formula q = universal ? Formula::forall(others, g) : Formula::exists(others, g);
    return simp(q);
  }
  if (body.is(C::True) || body.is(C::False)) return body;
  return universal ? Formula::forall(vars, body) : Formula::exists(vars, body);
}

Formula simp(const Formula& f) {
  switch (f.op()) {
    case C::Equal:
      if (f.terms()[0] == f.terms()[1]) return Formula::truth();
      return f;
    case C::Not: {
      Formula b = simp(f.body());
      if (b.is(C::True)) return Formula::falsity();
      if (b.is(C::False)) return Formula::truth();
      if (b.is(C::Not)) return b.body();
      return Formula::negation(b);
    }
    case C::And:
    case C::Or:
      return simp_junction(f);
    case C::Implies: {
      Formula a = simp(f.lhs());
      Formula b = simp(f.rhs());
      if (a.is(C::False) || b.is(C::True)) return Formula::truth();
      if (a.is(C::True)) return b;
      if (b.is(C::False)) return simp(Formula::negation(a));
      if (a == b) return Formula::truth();
      if (a.is_literal()) {
        Formula r = assume(b, a, true, free_variables(a));
        if (!(r == b)) return simp(Formula::implies(a, r));
      }
      return Formula::implies(a, b);
    }
    case C::Iff: {
      Formula a = simp(f.lhs());
      Formula b = simp(f.rhs());
      if (a == b) return Formula::truth();
      return simplify_constants(Formula::iff(a, b));
    }
    case C::Forall:
    case C::Exists:
      return simp_quantifier(f);
    case C::Forall2:
    case C::Exists2: {
      Formula b = simp(f.body());
      if (b.is(C::True) || b.is(C::False)) return b;
      std::vector<PredicateSpec> preds;
      for (const auto& p : f.preds())
        if (occurs_free(b, p.name)) preds.push_back(p);
      if (preds.empty()) return b;
      return f.is(C::Forall2) ? Formula::forall2(preds, b) : Formula::exists2(preds, b);
    }
    case C::Lambda:
      return f.with_body(simp(f.body()));
    default:
      return f;
  }
}

}  // namespace

Formula reform(const Formula& f) {
  if (is_clause_shape(f)) return reform_clause(f);
  if (f.children().empty()) return f;
  std::vector<Formula> cs;
  for (const auto& c : f.children()) cs.push_back(reform(c));
  return f.with_children(std::move(cs));
}

Formula simplify_formula(const Formula& f) {
  Formula cur = f;
  for (int i = 0; i < 16; ++i) {
    Formula next = simp(cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

Formula pipeline_c6(const Formula& f) {
  if (!is_first_order(f)) return f;
  FreshNames names(f);
  ClausalForm cf = simplify_clausal(clausify(f, ClausifyMode::Equivalence, names), ProtectedVocabulary::all());
  try {
    return simplify_constants(reform(unskolemize(cf)));
  } catch (const UnskolemizeError&) {
    return simplify_formula(f);
  }
}

Formula pipeline_d6(const Formula& f) {
  if (!is_first_order(f)) return f;
  return simplify_formula(nnf(Formula::negation(pipeline_c6(nnf(Formula::negation(f))))));
}

}  // namespace pie
