#include "pie/elimination.hpp"

#include <algorithm>

#include "pie/clause.hpp"
#include "pie/error.hpp"
#include "pie/preprocess.hpp"
#include "pie/syntax.hpp"

namespace pie {

namespace {

using C = Connective;
using Clock = std::chrono::steady_clock;

struct Stop {
  EliminationOutcome::Status status;
  std::string reason;
  Formula residue;
};

struct Ctx {
  EliminationOptions opts;
  Clock::time_point deadline;
  int branches = 0;

  void tick(const Formula& residue) {
    if (Clock::now() > deadline) throw Stop{EliminationOutcome::Status::Resources, "timeout", residue};
    if (++branches > opts.branch_bound)
      throw Stop{EliminationOutcome::Status::Resources, "branch bound exhausted", residue};
  }
};

Formula run_pipeline(Pipeline p, const Formula& f) {
  switch (p) {
    case Pipeline::C6:
      return pipeline_c6(f);
    case Pipeline::D6:
      return pipeline_d6(f);
    default:
      return f;
  }
}

struct Occurrences {
  int pos = 0;
  int neg = 0;
};

Occurrences count(const Clause& c, const std::string& p) {
  Occurrences o;
  for (const auto& l : c.literals)
    if (l.predicate == p) (l.positive ? o.pos : o.neg)++;
  return o;
}

Clause rename_apart(const Clause& c, FreshNames& names) {
  TermSubst s;
  for (const auto& v : c.variables()) s.emplace(v, Term::variable(names.like(v)));
  Clause out;
  for (const auto& l : c.literals) out.literals.push_back(l.substitute(s));
  return out;
}

std::vector<std::string> clause_vars(const Clause& c) {
  auto vs = c.variables();
  return {vs.begin(), vs.end()};
}

enum class Form { Positive, Negative };

// Ackermann's lemma on a clause set in which every clause has at most one
// literal of the eliminated polarity and none of the other.
Formula ackermann(const std::string& p, int arity, const std::vector<Clause>& clauses, Form form, FreshNames& names) {
  bool positive = form == Form::Positive;
  std::vector<std::string> xs;
  for (int i = 0; i < arity; ++i) xs.push_back(names.like("x"));
  std::vector<Formula> parts, rest;
  for (const auto& c0 : clauses) {
    Occurrences o = count(c0, p);
    if ((positive ? o.pos : o.neg) == 0) {
      rest.push_back(clause_formula(c0));
      continue;
    }
    Clause c = rename_apart(c0, names);
    std::vector<Formula> body;
    for (const auto& l : c.literals) {
      if (l.predicate == p) {
        for (int i = 0; i < arity; ++i) {
          Formula eq = Formula::equal(Term::variable(xs[i]), l.args[i]);
          body.push_back(positive ? eq : Formula::negation(eq));
        }
      }
    }
    for (const auto& l : c.literals)
      if (l.predicate != p) body.push_back(literal_formula(positive ? l.negated() : l));
    if (positive)
      parts.push_back(Formula::exists(clause_vars(c), Formula::conjunction(std::move(body))));
    else
      parts.push_back(Formula::forall(clause_vars(c), Formula::disjunction(std::move(body))));
  }
  Formula def = positive ? Formula::disjunction(std::move(parts)) : Formula::conjunction(std::move(parts));
  Formula lambda = Formula::lambda(xs, def);
  return simplify_formula(substitute_predicate(Formula::conjunction(std::move(rest)), {p, arity}, lambda));
}

bool fits(const std::vector<Clause>& clauses, const std::string& p, Form form) {
  for (const auto& c : clauses) {
    Occurrences o = count(c, p);
    if (form == Form::Positive ? (o.pos > 1 || (o.pos == 1 && o.neg > 0)) : (o.neg > 1 || (o.neg == 1 && o.pos > 0)))
      return false;
  }
  return true;
}

// Skolem symbols of `cf` occurring in `f` are turned back into quantifiers.
Formula restore_quantifiers(const Formula& f, const std::vector<SkolemSymbol>& skolems, FreshNames& names) {
  auto fs = function_symbols(f);
  std::vector<SkolemSymbol> used;
  for (const auto& s : skolems)
    if (fs.contains({s.name, s.arity})) used.push_back(s);
  if (used.empty()) return f;
  ClausalForm cf = clausify(f, ClausifyMode::Equivalence, names);
  cf.skolems.insert(cf.skolems.end(), used.begin(), used.end());
  cf = simplify_clausal(cf, ProtectedVocabulary::all());
  return simplify_formula(unskolemize(cf));
}

struct Dls {
  std::string p;
  int arity;
  Ctx& ctx;
  FreshNames& names;
  Formula residue;
  bool allow_split = true;

  std::optional<Formula> solve(const std::vector<Clause>& clauses, Form first) {
    ctx.tick(residue);
    bool any = false;
    for (const auto& c : clauses)
      if (count(c, p).pos + count(c, p).neg > 0) any = true;
    if (!any) return clauses_formula(clauses);
    Form second = first == Form::Positive ? Form::Negative : Form::Positive;
    for (Form f : {first, second})
      if (fits(clauses, p, f)) return ackermann(p, arity, clauses, f, names);
    if (!allow_split) return std::nullopt;
    // A ground clause splits the task into a disjunction of smaller ones.
    const Clause* pick = nullptr;
    for (const auto& c : clauses) {
      Occurrences o = count(c, p);
      if (o.pos + o.neg < 2 || !c.variables().empty()) continue;
      if (!pick || (o.pos > 0 && o.neg > 0)) pick = &c;
    }
    if (!pick) return std::nullopt;
    std::vector<Clause> others;
    for (const auto& c : clauses)
      if (&c != pick) others.push_back(c);
    std::vector<Clause> units;
    Clause remainder;
    for (const auto& l : pick->literals) {
      if (l.predicate == p)
        units.push_back(Clause{{l}, {}});
      else
        remainder.literals.push_back(l);
    }
    if (!remainder.empty()) units.push_back(remainder);
    std::vector<Formula> results;
    for (const auto& u : units) {
      ClausalForm branch;
      branch.clauses = others;
      branch.clauses.push_back(u);
      branch = simplify_clausal(branch, protect());
      auto r = solve(branch.clauses, first);
      if (!r) return std::nullopt;
      results.push_back(*r);
    }
    return simplify_formula(Formula::disjunction(std::move(results)));
  }

  ProtectedVocabulary protect() const {
    ProtectedVocabulary pv;
    pv.predicates = protected_;
    return pv;
  }

  std::set<std::string> protected_;
};

std::vector<Formula> disjuncts(const Formula& f) {
  if (f.is(C::Or)) return f.children();
  return {f};
}

// ∃p f for first-order f, or nullopt.
std::optional<Formula> eliminate_one(const PredicateSpec& spec, const Formula& f, Ctx& ctx, bool allow_split) {
  if (!occurs_free(f, spec.name)) return f;
  auto arities = predicate_arities(f);
  const auto& as = arities[spec.name];
  if (as.size() > 1) throw ArityError("predicate " + spec.name + " used with several arities");
  int arity = *as.begin();
  if (spec.arity && *spec.arity != arity) throw ArityError("quantified predicate " + spec.name + " has a different arity");

  FreshNames names(f);
  // Free first-order variables are parameters of the task.
  std::vector<std::pair<Term, Term>> frozen;
  Formula g = f;
  for (const auto& v : free_variables(f)) {
    Term c = Term::constant(names.like(v));
    g = replace_term(g, Term::variable(v), c);
    frozen.push_back({c, Term::variable(v)});
  }
  Formula residue = Formula::exists2({spec}, f);
  g = run_pipeline(ctx.opts.pre, g);

  std::vector<Formula> results;
  for (const auto& d : disjuncts(g)) {
    std::optional<Formula> out;
    ClausalForm cf = clausify(nnf(d), ClausifyMode::Equivalence, names);
    Dls dls{spec.name, arity, ctx, names, residue, allow_split, {}};
    for (const auto& [q, _] : predicate_arities(d))
      if (q != spec.name) dls.protected_.insert(q);
    cf = simplify_clausal(cf, dls.protect());
    for (Form first : {Form::Positive, Form::Negative}) {
      auto r = dls.solve(cf.clauses, first);
      if (!r) break;
      try {
        out = restore_quantifiers(*r, cf.skolems, names);
        break;
      } catch (const UnskolemizeError&) {
      }
    }
    if (!out) return std::nullopt;
    results.push_back(*out);
  }
  Formula r = Formula::disjunction(std::move(results));
  if (!frozen.empty()) {
    for (const auto& [c, v] : frozen) names.reserve(v.name());
    r = rename_bound(r, names);
    for (const auto& [c, v] : frozen) r = replace_term(r, c, v);
  }
  return simplify_formula(r);
}

Formula eliminate_block(const std::vector<PredicateSpec>& preds, Formula body, Ctx& ctx) {
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!is_first_order(body)) throw FragmentError("second-order content left inside the eliminated scope");
    ctx.branches = 0;
    auto r = eliminate_one(preds[i], body, ctx, true);
    if (!r) {
      std::vector<PredicateSpec> rest(preds.begin() + static_cast<std::ptrdiff_t>(i), preds.end());
      throw Stop{EliminationOutcome::Status::Nonreducible,
                 "no Ackermann form for predicate " + preds[i].name, Formula::exists2(rest, body)};
    }
    body = *r;
  }
  return body;
}

Formula eliminate_rec(const Formula& f, Ctx& ctx) {
  switch (f.op()) {
    case C::Exists2:
      return eliminate_block(f.preds(), eliminate_rec(f.body(), ctx), ctx);
    case C::Forall2: {
      Formula body = eliminate_rec(f.body(), ctx);
      return simplify_formula(Formula::negation(eliminate_block(f.preds(), nnf(Formula::negation(body)), ctx)));
    }
    case C::MacroCall:
    case C::Lambda:
    case C::Apply:
      throw FragmentError("unexpanded macro or λ-term in elimination input");
    default: {
      if (f.children().empty()) return f;
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(eliminate_rec(c, ctx));
      return f.with_children(std::move(cs));
    }
  }
}

// Ground equations get a fixed orientation so that symmetric copies merge.
Formula orient(const Formula& f) {
  if (f.is(C::Equal)) {
    const auto& a = f.terms()[0];
    const auto& b = f.terms()[1];
    if (a.is_ground() && b.is_ground() && b < a) return Formula::equal(b, a);
    return f;
  }
  if (f.children().empty()) return f;
  std::vector<Formula> cs;
  for (const auto& c : f.children()) cs.push_back(orient(c));
  return f.with_children(std::move(cs));
}

// Negations are pushed over quantifiers and a negated conjunction with a
// negative operand reads as an implication.
Formula present(const Formula& f) {
  if (f.is(C::Not)) {
    const Formula& b = f.body();
    if (b.is(C::Exists)) return Formula::forall(b.vars(), present(Formula::negation(b.body())));
    if (b.is(C::Forall)) return Formula::exists(b.vars(), present(Formula::negation(b.body())));
    if (b.is(C::Not)) return present(b.body());
    if (b.is(C::Or) || b.is(C::Implies)) return present(nnf(f));
    if (b.is(C::And)) {
      const auto& cs = b.children();
      if (std::all_of(cs.begin(), cs.end(), [](const Formula& c) { return c.is(C::Not); })) {
        std::vector<Formula> ds;
        for (const auto& c : cs) ds.push_back(present(c.body()));
        return Formula::disjunction(std::move(ds));
      }
      for (std::size_t i = cs.size(); i-- > 0;) {
        if (!cs[i].is(C::Not)) continue;
        std::vector<Formula> rest;
        for (std::size_t j = 0; j < cs.size(); ++j)
          if (j != i) rest.push_back(present(cs[j]));
        return Formula::implies(Formula::conjunction(std::move(rest)), present(cs[i].body()));
      }
    }
    return Formula::negation(present(b));
  }
  if (f.children().empty()) return f;
  std::vector<Formula> cs;
  for (const auto& c : f.children()) cs.push_back(present(c));
  return f.with_children(std::move(cs));
}

Formula finish(const Formula& f, Pipeline simp_result) {
  Formula r = simplify_formula(orient(f));
  if (simp_result != Pipeline::None) r = run_pipeline(simp_result, r);
  r = simplify_formula(present(r));
  return tidy_variables(reform(r));
}

}  // namespace

EliminationOutcome eliminate(const Formula& f, const EliminationOptions& opts) {
  Ctx ctx{opts, Clock::now() + opts.timeout, 0};
  try {
    Formula r = eliminate_rec(beta_reduce(f), ctx);
    return {EliminationOutcome::Status::Success, finish(r, opts.simp_result), {}};
  } catch (const Stop& s) {
    return {s.status, s.residue, s.reason};
  }
}

Formula ackermann_rewrite(const PredicateSpec& p, const Formula& f) {
  if (!is_first_order(f)) throw FragmentError("ackermann_rewrite needs a first-order formula");
  EliminationOptions opts;
  Ctx ctx{opts, Clock::now() + opts.timeout, 0};
  std::optional<Formula> r;
  try {
    r = eliminate_one(p, f, ctx, false);
  } catch (const Stop& s) {
    throw EliminationError(s.reason);
  }
  if (!r) throw EliminationError("formula is not in Ackermann form for " + p.name);
  return *r;
}

Formula eliminate_propositional(const std::string& p, const Formula& f) {
  auto arities = predicate_arities(f);
  if (auto it = arities.find(p); it != arities.end() && (it->second.size() != 1 || *it->second.begin() != 0))
    throw ArityError("Shannon expansion needs a nullary predicate: " + p);
  Formula t = substitute_predicate(f, {p, 0}, Formula::lambda({}, Formula::truth()));
  Formula e = substitute_predicate(f, {p, 0}, Formula::lambda({}, Formula::falsity()));
  return simplify_formula(Formula::disjunction({t, e}));
}

std::pair<Formula, Formula> eliminate_staged(const Formula& e, const EliminationOptions& opts) {
  FreshNames names(e);
  std::string edge = names.like("e");
  Formula graph = parse_formula("all(x, (r(x) ; g(x))), all([x,y], (" + edge +
                                "(x,y) -> (~((r(x), r(y))), ~((g(x), g(y))))))");
  Formula body;
  if (e.is(C::Lambda)) {
    if (e.vars().size() != 2) throw ArityError("edge relation must be binary");
    body = substitute_predicate(graph, {edge, 2}, e);
  } else if (e.is(C::Atom) && e.terms().empty()) {
    body = rename_predicate(graph, {edge, 2}, e.name());
  } else {
    throw FragmentError("edge relation must be a predicate name or a binary λ");
  }
  EliminationOptions stage = opts;
  stage.pre = Pipeline::C6;
  stage.simp_result = Pipeline::None;
  auto first = eliminate(Formula::exists2({{"g", std::nullopt}}, body), stage);
  if (!first.ok()) throw EliminationError("eliminating g failed: " + first.reason);
  stage.pre = Pipeline::D6;
  stage.simp_result = opts.simp_result;
  auto second = eliminate(Formula::exists2({{"r", std::nullopt}}, first.result), stage);
  if (!second.ok()) throw EliminationError("eliminating r failed: " + second.reason);
  return {e, second.result};
}

}  // namespace pie
