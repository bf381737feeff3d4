#include "pie/prover.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "pie/error.hpp"
#include "pie/preprocess.hpp"
#include "pie/syntax.hpp"

namespace pie {

namespace {

thread_local TableauObserver tableau_observer;
thread_local ModelObserver model_observer;

using Clock = std::chrono::steady_clock;

// Heap cell: a functor application or a variable (sym == -1, args = var id).
struct Cell {
  int sym;
  int arity;
  int args;
};

struct Template {
  std::vector<Cell> cells;
  std::vector<int> argv;
  struct Lit {
    bool positive;
    int pred;
    int root;
  };
  std::vector<Lit> lits;
  int nvars = 0;
  int id = 0;
};

struct Event {
  enum Kind { Start, Extend, Reduce } kind;
  int clause = -1;
  int connected = -1;
  int partner = 0;
  std::vector<int> roots;
};

struct Goal {
  bool positive;
  int pred;
  int atom;
};

struct PathNode {
  Goal goal;
  const PathNode* up;
  int depth;
};

class Search {
 public:
  Search(const std::vector<Clause>& clauses, const std::vector<Side>& sides, Clock::time_point deadline)
      : sides_(sides), deadline_(deadline) {
    for (std::size_t i = 0; i < clauses.size(); ++i) templates_.push_back(compile(clauses[i], static_cast<int>(i)));
    for (const auto& t : templates_)
      for (std::size_t j = 0; j < t.lits.size(); ++j) index_[{t.lits[j].positive, t.lits[j].pred}].push_back({t.id, static_cast<int>(j)});
  }

  // Tries every start clause at one depth limit.
  bool run(int limit, const std::vector<int>& starts) {
    limit_ = limit;
    hit_limit_ = false;
    for (int s : starts) {
      Mark m = mark();
      auto roots = instantiate(templates_[s]);
      events_.push_back({Event::Start, s, -1, 0, roots});
      std::vector<Goal> goals;
      for (std::size_t j = 0; j < roots.size(); ++j) goals.push_back({templates_[s].lits[j].positive, templates_[s].lits[j].pred, roots[j]});
      if (prove_all(goals, 0, nullptr, [] { return true; })) return true;
      events_.pop_back();
      restore(m);
    }
    return false;
  }

  bool hit_limit() const { return hit_limit_; }

  TableauNode build(const std::string& filler) {
    std::size_t pos = 0;
    TableauNode root;
    const Event& e = events_[pos++];
    root.closure = TableauNode::Closure::Extended;
    for (std::size_t j = 0; j < e.roots.size(); ++j) root.children.push_back(node(e.roots[j], e.clause, j, filler));
    for (auto& c : root.children) replay(c, pos, filler);
    return root;
  }

 private:
  struct Mark {
    std::size_t heap, argv, vars, trail;
  };

  using Cont = std::function<bool()>;

  int symbol(const std::string& name, std::size_t arity) {
    auto key = name + "/" + std::to_string(arity);
    auto [it, ins] = symbols_.emplace(key, static_cast<int>(names_.size()));
    if (ins) names_.push_back(name);
    return it->second;
  }

  int compile_term(const Term& t, Template& tpl, std::map<std::string, int>& vars) {
    if (t.is_variable()) {
      auto [it, ins] = vars.emplace(t.name(), static_cast<int>(vars.size()));
      tpl.cells.push_back({-1, 0, it->second});
      return static_cast<int>(tpl.cells.size()) - 1;
    }
    std::vector<int> args;
    for (const auto& a : t.args()) args.push_back(compile_term(a, tpl, vars));
    int first = static_cast<int>(tpl.argv.size());
    tpl.argv.insert(tpl.argv.end(), args.begin(), args.end());
    tpl.cells.push_back({symbol(t.name(), t.arity()), static_cast<int>(t.arity()), first});
    return static_cast<int>(tpl.cells.size()) - 1;
  }

  Template compile(const Clause& c, int id) {
    Template tpl;
    tpl.id = id;
    std::map<std::string, int> vars;
    for (const auto& l : c.literals) {
      Term atom = Term::compound(l.predicate, l.args);
      int root = compile_term(atom, tpl, vars);
      tpl.lits.push_back({l.positive, tpl.cells[root].sym, root});
    }
    tpl.nvars = static_cast<int>(vars.size());
    return tpl;
  }

  Mark mark() const { return {heap_.size(), argv_.size(), bind_.size(), trail_.size()}; }

  void restore(const Mark& m) {
    while (trail_.size() > m.trail) {
      bind_[trail_.back()] = -1;
      trail_.pop_back();
    }
    heap_.resize(m.heap);
    argv_.resize(m.argv);
    bind_.resize(m.vars);
  }

  std::vector<int> instantiate(const Template& t) {
    int hb = static_cast<int>(heap_.size());
    int ab = static_cast<int>(argv_.size());
    int vb = static_cast<int>(bind_.size());
    for (const auto& c : t.cells) heap_.push_back(c.sym < 0 ? Cell{-1, 0, c.args + vb} : Cell{c.sym, c.arity, c.args + ab});
    for (int a : t.argv) argv_.push_back(a + hb);
    bind_.resize(vb + t.nvars, -1);
    std::vector<int> roots;
    for (const auto& l : t.lits) roots.push_back(l.root + hb);
    return roots;
  }

  int deref(int i) const {
    while (heap_[i].sym < 0 && bind_[heap_[i].args] >= 0) i = bind_[heap_[i].args];
    return i;
  }

  bool occurs(int var, int t) const {
    t = deref(t);
    if (heap_[t].sym < 0) return heap_[t].args == var;
    for (int k = 0; k < heap_[t].arity; ++k)
      if (occurs(var, argv_[heap_[t].args + k])) return true;
    return false;
  }

  bool unify(int a, int b) {
    a = deref(a);
    b = deref(b);
    if (a == b) return true;
    const Cell& x = heap_[a];
    const Cell& y = heap_[b];
    if (x.sym < 0) {
      if (y.sym < 0 && y.args == x.args) return true;
      if (occurs(x.args, b)) return false;
      bind_[x.args] = b;
      trail_.push_back(x.args);
      return true;
    }
    if (y.sym < 0) return unify(b, a);
    if (x.sym != y.sym || x.arity != y.arity) return false;
    for (int k = 0; k < x.arity; ++k)
      if (!unify(argv_[x.args + k], argv_[y.args + k])) return false;
    return true;
  }

  bool same(int a, int b) const {
    a = deref(a);
    b = deref(b);
    if (a == b) return true;
    const Cell& x = heap_[a];
    const Cell& y = heap_[b];
    if (x.sym < 0 || y.sym < 0) return x.sym == y.sym && x.args == y.args;
    if (x.sym != y.sym) return false;
    for (int k = 0; k < x.arity; ++k)
      if (!same(argv_[x.args + k], argv_[y.args + k])) return false;
    return true;
  }

  void tick() {
    if ((++steps_ & 1023) == 0 && Clock::now() > deadline_) throw ProofTimeout();
  }

  bool prove_all(const std::vector<Goal>& goals, std::size_t i, const PathNode* path, const Cont& k) {
    if (i == goals.size()) return k();
    return prove_one(goals[i], path, [&] { return prove_all(goals, i + 1, path, k); });
  }

  bool prove_one(const Goal& g, const PathNode* path, const Cont& k) {
    tick();
    for (const PathNode* p = path; p; p = p->up)
      if (p->goal.positive == g.positive && p->goal.pred == g.pred && same(p->goal.atom, g.atom)) return false;
    // Reduction.
    int dist = 1;
    for (const PathNode* p = path; p; p = p->up, ++dist) {
      if (p->goal.positive == g.positive || p->goal.pred != g.pred) continue;
      Mark m = mark();
      if (unify(p->goal.atom, g.atom)) {
        events_.push_back({Event::Reduce, -1, -1, dist, {}});
        if (k()) return true;
        events_.pop_back();
      }
      restore(m);
    }
    // Extension.
    int depth = path ? path->depth + 1 : 1;
    auto it = index_.find({!g.positive, g.pred});
    if (it == index_.end()) return false;
    PathNode here{g, path, depth};
    for (const auto& [cid, j] : it->second) {
      const Template& t = templates_[cid];
      if (t.lits.size() > 1 && depth > limit_) {
        hit_limit_ = true;
        continue;
      }
      Mark m = mark();
      auto roots = instantiate(t);
      if (unify(roots[j], g.atom)) {
        events_.push_back({Event::Extend, cid, j, 0, roots});
        std::vector<Goal> rest;
        for (std::size_t q = 0; q < roots.size(); ++q)
          if (static_cast<int>(q) != j) rest.push_back({t.lits[q].positive, t.lits[q].pred, roots[q]});
        if (prove_all(rest, 0, &here, k)) return true;
        events_.pop_back();
      }
      restore(m);
    }
    return false;
  }

  Term to_term(int i, const std::string& filler) const {
    i = deref(i);
    const Cell& c = heap_[i];
    if (c.sym < 0) return Term::constant(filler);
    std::vector<Term> args;
    for (int q = 0; q < c.arity; ++q) args.push_back(to_term(argv_[c.args + q], filler));
    return Term::compound(names_[c.sym], std::move(args));
  }

  TableauNode node(int root, int clause, std::size_t j, const std::string& filler) const {
    TableauNode n;
    Term atom = to_term(root, filler);
    n.literal = {templates_[clause].lits[j].positive, atom.name(), atom.args()};
    n.clause = clause;
    n.side = sides_[clause];
    return n;
  }

  void replay(TableauNode& n, std::size_t& pos, const std::string& filler) {
    const Event& e = events_[pos++];
    if (e.kind == Event::Reduce) {
      n.closure = TableauNode::Closure::Ancestor;
      n.partner = e.partner;
      return;
    }
    n.closure = TableauNode::Closure::Extended;
    for (std::size_t j = 0; j < e.roots.size(); ++j) n.children.push_back(node(e.roots[j], e.clause, j, filler));
    for (std::size_t j = 0; j < n.children.size(); ++j) {
      if (static_cast<int>(j) == e.connected) {
        n.children[j].closure = TableauNode::Closure::Ancestor;
        n.children[j].partner = 1;
        continue;
      }
      replay(n.children[j], pos, filler);
    }
  }

  std::vector<Template> templates_;
  const std::vector<Side>& sides_;
  Clock::time_point deadline_;
  std::map<std::string, int> symbols_;
  std::vector<std::string> names_;
  std::map<std::pair<bool, int>, std::vector<std::pair<int, int>>> index_;
  std::vector<Cell> heap_;
  std::vector<int> argv_;
  std::vector<int> bind_;
  std::vector<int> trail_;
  std::vector<Event> events_;
  int limit_ = 1;
  bool hit_limit_ = false;
  std::uint64_t steps_ = 0;
};

// Fills in partner sides once the tree shape is known.
void finish(TableauNode& n, std::vector<const TableauNode*>& path) {
  path.push_back(&n);
  for (auto& c : n.children) finish(c, path);
  path.pop_back();
  if (n.closure == TableauNode::Closure::Ancestor) {
    const TableauNode* p = path[path.size() - n.partner];
    n.partner_side = p->side;
  }
}

void collect_symbols(const Clause& c, std::set<std::pair<std::string, int>>& funs, std::set<std::pair<std::string, int>>& preds) {
  for (const auto& l : c.literals) {
    if (!l.is_equality()) preds.emplace(l.predicate, static_cast<int>(l.args.size()));
    for (const auto& a : l.args) a.collect_functors(funs);
  }
}

bool uses_equality(const std::vector<Clause>& cs) {
  for (const auto& c : cs)
    for (const auto& l : c.literals)
      if (l.is_equality()) return true;
  return false;
}

std::vector<Clause> equality_axioms(const std::vector<Clause>& cs, const std::vector<Side>& sides,
                                    std::vector<Side>& axiom_sides) {
  auto V = [](const std::string& n) { return Term::variable(n); };
  auto eq = [](bool pos, Term a, Term b) { return Literal{pos, "=", {std::move(a), std::move(b)}}; };
  std::vector<Clause> out;
  out.push_back({{eq(true, V("X"), V("X"))}, std::nullopt});
  out.push_back({{eq(false, V("X"), V("Y")), eq(true, V("Y"), V("X"))}, std::nullopt});
  out.push_back({{eq(false, V("X"), V("Y")), eq(false, V("Y"), V("Z")), eq(true, V("X"), V("Z"))}, std::nullopt});
  axiom_sides.assign(3, Side::Left);

  std::map<std::pair<std::string, int>, int> fun_side, pred_side;  // bit 1 left, bit 2 right
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::set<std::pair<std::string, int>> funs, preds;
    collect_symbols(cs[i], funs, preds);
    int bit = sides[i] == Side::Left ? 1 : 2;
    for (const auto& f : funs) fun_side[f] |= bit;
    for (const auto& p : preds) pred_side[p] |= bit;
  }
  auto side_of = [](int mask) { return mask == 2 ? Side::Right : Side::Left; };
  for (const auto& [f, mask] : fun_side) {
    if (f.second == 0) continue;
    for (int i = 0; i < f.second; ++i) {
      std::vector<Term> xs, ys;
      for (int k = 0; k < f.second; ++k) {
        xs.push_back(V("X" + std::to_string(k)));
        ys.push_back(k == i ? V("Y") : V("X" + std::to_string(k)));
      }
      out.push_back({{eq(false, xs[i], V("Y")), eq(true, Term::compound(f.first, xs), Term::compound(f.first, ys))}, std::nullopt});
      axiom_sides.push_back(side_of(mask));
    }
  }
  for (const auto& [p, mask] : pred_side) {
    for (int i = 0; i < p.second; ++i) {
      std::vector<Term> xs, ys;
      for (int k = 0; k < p.second; ++k) {
        xs.push_back(V("X" + std::to_string(k)));
        ys.push_back(k == i ? V("Y") : V("X" + std::to_string(k)));
      }
      out.push_back({{Literal{false, p.first, xs}, eq(false, xs[i], V("Y")), Literal{true, p.first, ys}}, std::nullopt});
      axiom_sides.push_back(side_of(mask));
    }
  }
  return out;
}

std::string filler_constant(const std::vector<Clause>& cs) {
  FreshNames names;
  for (const auto& c : cs) {
    std::set<std::pair<std::string, int>> funs, preds;
    collect_symbols(c, funs, preds);
    for (const auto& f : funs) names.reserve(f.first);
    for (const auto& p : preds) names.reserve(p.first);
  }
  return names.like("c");
}

}  // namespace

std::size_t TableauNode::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

void set_tableau_observer(TableauObserver obs) { tableau_observer = std::move(obs); }
void set_model_observer(ModelObserver obs) { model_observer = std::move(obs); }

std::optional<Tableau> prove(const ClausalForm& left, const ClausalForm& right, const ProverConfig& cfg) {
  Tableau t;
  for (const auto& c : left.clauses) {
    t.clauses.push_back(c);
    t.sides.push_back(Side::Left);
  }
  for (const auto& c : right.clauses) {
    t.clauses.push_back(c);
    t.sides.push_back(Side::Right);
  }
  if (uses_equality(t.clauses)) {
    std::vector<Side> as;
    auto ax = equality_axioms(t.clauses, t.sides, as);
    for (std::size_t i = 0; i < ax.size(); ++i) {
      t.clauses.push_back(ax[i]);
      t.sides.push_back(as[i]);
    }
  }
  // Right-side (goal) clauses first, then the positive ones for completeness.
  std::vector<int> starts;
  for (std::size_t i = 0; i < t.clauses.size(); ++i)
    if (t.sides[i] == Side::Right) starts.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < t.clauses.size(); ++i) {
    bool positive = std::all_of(t.clauses[i].literals.begin(), t.clauses[i].literals.end(),
                                [](const Literal& l) { return l.positive; });
    if (t.sides[i] == Side::Left && positive) starts.push_back(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < t.clauses.size(); ++i)
    if (t.clauses[i].empty()) {
      // The empty clause closes the root at once.
      t.root.closure = TableauNode::Closure::Extended;
      t.root.clause = static_cast<int>(i);
      t.root.side = t.sides[i];
      if (tableau_observer) tableau_observer(t);
      return t;
    }

  auto deadline = Clock::now() + cfg.timeout;
  Search search(t.clauses, t.sides, deadline);
  try {
    for (int d = std::max(1, cfg.start_depth); d <= cfg.max_depth; d += std::max(1, cfg.depth_increment)) {
      if (search.run(d, starts)) {
        t.root = search.build(filler_constant(t.clauses));
        std::vector<const TableauNode*> path;
        finish(t.root, path);
        if (tableau_observer) tableau_observer(t);
        return t;
      }
      if (!search.hit_limit()) break;
    }
  } catch (const ProofTimeout&) {
  }
  return std::nullopt;
}

std::optional<std::string> check_tableau(const Tableau& t) {
  if (t.clauses.size() != t.sides.size()) return "clause and side lists differ in length";
  std::vector<const TableauNode*> path;
  std::function<std::optional<std::string>(const TableauNode&)> check = [&](const TableauNode& n) -> std::optional<std::string> {
    if (n.children.empty()) {
      if (n.is_root()) {
        if (n.clause >= 0 && n.clause < static_cast<int>(t.clauses.size()) && t.clauses[n.clause].empty()) return std::nullopt;
        return "root without start clause";
      }
      if (n.closure != TableauNode::Closure::Ancestor) return "open leaf " + literal_formula(n.literal).name();
      if (n.partner < 1 || n.partner > static_cast<int>(path.size()) - 1) return "closure partner out of range";
      const TableauNode* p = path[path.size() - n.partner];
      if (p->literal.positive == n.literal.positive || p->literal.predicate != n.literal.predicate ||
          p->literal.args != n.literal.args)
        return "leaf not complementary to its partner";
      if (p->side != n.partner_side) return "partner side mismatch";
      return std::nullopt;
    }
    int cid = n.children.front().clause;
    if (cid < 0 || cid >= static_cast<int>(t.clauses.size())) return "bad clause id";
    const Clause& c = t.clauses[cid];
    if (c.literals.size() != n.children.size()) return "sibling group size differs from its clause";
    TermSubst s;
    for (std::size_t j = 0; j < n.children.size(); ++j) {
      const auto& ch = n.children[j];
      if (ch.clause != cid) return "siblings from different clauses";
      if (ch.side != t.sides[cid]) return "side label differs from clause";
      if (!match_literal(c.literals[j], ch.literal, s)) return "sibling group is not an instance of its clause";
    }
    path.push_back(&n);
    for (const auto& ch : n.children)
      if (auto err = check(ch)) return err;
    path.pop_back();
    return std::nullopt;
  };
  return check(t.root);
}

// ---------------------------------------------------------------------------
// Finite models

namespace {

int eval_term(const Model& m, const Term& t, std::map<std::string, int>& env) {
  if (t.is_variable()) {
    auto it = env.find(t.name());
    if (it == env.end()) throw FragmentError("unbound variable " + t.name());
    return it->second;
  }
  std::vector<int> args;
  for (const auto& a : t.args()) args.push_back(eval_term(m, a, env));
  auto f = m.functions.find(t.name());
  if (f == m.functions.end()) return 0;
  auto v = f->second.find(args);
  return v == f->second.end() ? 0 : v->second;
}

bool eval(const Model& m, const Formula& f, std::map<std::string, int>& env) {
  using C = Connective;
  switch (f.op()) {
    case C::True:
      return true;
    case C::False:
      return false;
    case C::Atom: {
      std::vector<int> args;
      for (const auto& a : f.terms()) args.push_back(eval_term(m, a, env));
      auto p = m.predicates.find(f.name());
      if (p == m.predicates.end()) return false;
      auto v = p->second.find(args);
      return v != p->second.end() && v->second;
    }
    case C::Equal:
      return eval_term(m, f.terms()[0], env) == eval_term(m, f.terms()[1], env);
    case C::Not:
      return !eval(m, f.body(), env);
    case C::And:
      for (const auto& c : f.children())
        if (!eval(m, c, env)) return false;
      return true;
    case C::Or:
      for (const auto& c : f.children())
        if (eval(m, c, env)) return true;
      return false;
    case C::Implies:
      return !eval(m, f.lhs(), env) || eval(m, f.rhs(), env);
    case C::Iff:
      return eval(m, f.lhs(), env) == eval(m, f.rhs(), env);
    case C::Forall:
    case C::Exists: {
      bool universal = f.is(C::Forall);
      std::map<std::string, std::optional<int>> saved;
      for (const auto& v : f.vars()) {
        auto it = env.find(v);
        saved[v] = it == env.end() ? std::nullopt : std::optional<int>(it->second);
      }
      std::vector<int> idx(f.vars().size(), 0);
      bool result = universal;
      for (;;) {
        for (std::size_t i = 0; i < idx.size(); ++i) env[f.vars()[i]] = idx[i];
        bool r = eval(m, f.body(), env);
        if (r != universal) {
          result = r;
          break;
        }
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == m.size) idx[i++] = 0;
        if (i == idx.size()) break;
      }
      for (const auto& [v, old] : saved) {
        if (old)
          env[v] = *old;
        else
          env.erase(v);
      }
      return result;
    }
    default:
      throw FragmentError("cannot evaluate a non-first-order formula");
  }
}

// Plain DPLL with two watched literals and chronological backtracking.
class Dpll {
 public:
  explicit Dpll(int nvars) : val_(nvars, 0), watches_(2 * nvars) {}

  int var_count() const { return static_cast<int>(val_.size()); }

  // Literals are ±(v+1).
  void add(std::vector<int> c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (std::binary_search(c.begin(), c.end(), -c[i])) return;
    if (c.empty()) {
      unsat_ = true;
      return;
    }
    if (c.size() == 1) {
      units_.push_back(c[0]);
      return;
    }
    int id = static_cast<int>(clauses_.size());
    watches_[code(c[0])].push_back(id);
    watches_[code(c[1])].push_back(id);
    clauses_.push_back(std::move(c));
  }

  std::optional<bool> solve(Clock::time_point deadline) {
    if (unsat_) return false;
    for (int u : units_) {
      if (value(u) == -1) return false;
      if (value(u) == 0) assign(u);
    }
    if (!propagate()) return false;
    struct Decision {
      std::size_t trail;
      int lit;
      bool flipped;
    };
    std::vector<Decision> decisions;
    std::uint64_t steps = 0;
    int next = 0;
    for (;;) {
      if ((++steps & 255) == 0 && Clock::now() > deadline) return std::nullopt;
      while (next < var_count() && val_[next] != 0) ++next;
      if (next == var_count()) return true;
      decisions.push_back({trail_.size(), -(next + 1), false});
      assign(-(next + 1));
      while (!propagate()) {
        while (!decisions.empty() && decisions.back().flipped) decisions.pop_back();
        if (decisions.empty()) return false;
        auto& d = decisions.back();
        undo(d.trail);
        d.flipped = true;
        d.lit = -d.lit;
        assign(d.lit);
        next = 0;
      }
      next = 0;
    }
  }

  bool truth(int v) const { return val_[v] > 0; }

 private:
  static int code(int lit) { return lit > 0 ? 2 * (lit - 1) : 2 * (-lit - 1) + 1; }
  int value(int lit) const {
    int v = val_[std::abs(lit) - 1];
    return lit > 0 ? v : -v;
  }
  void assign(int lit) {
    val_[std::abs(lit) - 1] = lit > 0 ? 1 : -1;
    trail_.push_back(lit);
  }
  void undo(std::size_t to) {
    while (trail_.size() > to) {
      val_[std::abs(trail_.back()) - 1] = 0;
      trail_.pop_back();
    }
    head_ = std::min(head_, to);
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      int falsified = -trail_[head_++];
      auto& ws = watches_[code(falsified)];
      for (std::size_t i = 0; i < ws.size();) {
        auto& c = clauses_[ws[i]];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          ++i;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k)
          if (value(c[k]) != -1) {
            std::swap(c[1], c[k]);
            watches_[code(c[1])].push_back(ws[i]);
            ws[i] = ws.back();
            ws.pop_back();
            moved = true;
            break;
          }
        if (moved) continue;
        if (value(c[0]) == -1) {
          head_ = trail_.size();
          return false;
        }
        if (value(c[0]) == 0) assign(c[0]);
        ++i;
      }
    }
    return true;
  }

  std::vector<int> val_;
  std::vector<std::vector<int>> watches_;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> units_;
  std::vector<int> trail_;
  std::size_t head_ = 0;
  bool unsat_ = false;
};

// Flattened literal: predicate over variables, variable equality, or the
// negative function definition f(x̄) ≠ y.
struct FlatLit {
  enum Kind { Pred, Eq, Fun } kind;
  bool positive;
  std::string name;
  std::vector<int> vars;  // for Fun: args then result
};

struct FlatClause {
  std::vector<FlatLit> lits;
  int nvars = 0;
};

int flatten_term(const Term& t, std::map<std::string, int>& vars, int& next, std::vector<FlatLit>& extra) {
  if (t.is_variable()) {
    auto [it, ins] = vars.emplace(t.name(), next);
    if (ins) ++next;
    return it->second;
  }
  std::vector<int> args;
  for (const auto& a : t.args()) args.push_back(flatten_term(a, vars, next, extra));
  int y = next++;
  args.push_back(y);
  extra.push_back({FlatLit::Fun, false, t.name(), args});
  return y;
}

FlatClause flatten(const Clause& c) {
  FlatClause out;
  std::map<std::string, int> vars;
  int next = 0;
  std::vector<FlatLit> extra;
  for (const auto& l : c.literals) {
    std::vector<int> vs;
    for (const auto& a : l.args) vs.push_back(flatten_term(a, vars, next, extra));
    if (l.is_equality())
      out.lits.push_back({FlatLit::Eq, l.positive, "=", vs});
    else
      out.lits.push_back({FlatLit::Pred, l.positive, l.predicate, vs});
  }
  for (auto& e : extra) out.lits.push_back(std::move(e));
  out.nvars = next;
  return out;
}

int ipow(int b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > (1 << 30)) return 1 << 30;
  }
  return static_cast<int>(r);
}

std::optional<Model> model_of_size(const std::vector<FlatClause>& cs, const std::map<std::string, int>& preds,
                                   const std::map<std::string, int>& funs, const std::vector<std::string>& constants, int n,
                                   Clock::time_point deadline, bool& timed_out) {
  // Variable numbering.
  std::map<std::pair<std::string, std::vector<int>>, int> pvar;
  std::map<std::tuple<std::string, std::vector<int>, int>, int> fvar;
  int nv = 0;
  auto tuples = [n](int arity) {
    std::vector<std::vector<int>> out;
    std::vector<int> t(arity, 0);
    for (;;) {
      out.push_back(t);
      int i = 0;
      while (i < arity && ++t[i] == n) t[i++] = 0;
      if (i == arity) break;
    }
    return out;
  };
  for (const auto& [p, a] : preds)
    for (const auto& t : tuples(a)) pvar[{p, t}] = ++nv;
  for (const auto& [f, a] : funs)
    for (const auto& t : tuples(a))
      for (int e = 0; e < n; ++e) fvar[{f, t, e}] = ++nv;

  long long instances = 0;
  for (const auto& c : cs) instances += ipow(n, c.nvars);
  if (instances > 400000) return std::nullopt;

  Dpll sat(nv);
  for (const auto& [f, a] : funs)
    for (const auto& t : tuples(a)) {
      std::vector<int> some;
      for (int e = 0; e < n; ++e) some.push_back(fvar[{f, t, e}]);
      sat.add(some);
      for (int e = 0; e < n; ++e)
        for (int e2 = e + 1; e2 < n; ++e2) sat.add({-fvar[{f, t, e}], -fvar[{f, t, e2}]});
    }
  // Constants: the i-th takes a value in {0..i}.
  for (std::size_t i = 0; i < constants.size(); ++i)
    for (int e = static_cast<int>(i) + 1; e < n; ++e) sat.add({-fvar[{constants[i], {}, e}]});

  for (const auto& c : cs) {
    std::vector<int> asg(c.nvars, 0);
    for (;;) {
      bool satisfied = false;
      std::vector<int> lits;
      for (const auto& l : c.lits) {
        if (l.kind == FlatLit::Eq) {
          bool eq = asg[l.vars[0]] == asg[l.vars[1]];
          if (eq == l.positive) {
            satisfied = true;
            break;
          }
          continue;
        }
        std::vector<int> args;
        for (std::size_t k = 0; k + (l.kind == FlatLit::Fun ? 1 : 0) < l.vars.size(); ++k) args.push_back(asg[l.vars[k]]);
        int v = l.kind == FlatLit::Pred ? pvar.at({l.name, args}) : fvar.at({l.name, args, asg[l.vars.back()]});
        lits.push_back(l.positive ? v : -v);
      }
      if (!satisfied) sat.add(lits);
      int i = 0;
      while (i < c.nvars && ++asg[i] == n) asg[i++] = 0;
      if (i == c.nvars) break;
    }
  }
  auto r = sat.solve(deadline);
  if (!r) {
    timed_out = true;
    return std::nullopt;
  }
  if (!*r) return std::nullopt;
  Model m;
  m.size = n;
  for (const auto& [key, v] : pvar) m.predicates[key.first][key.second] = sat.truth(v - 1);
  for (const auto& [key, v] : fvar)
    if (sat.truth(v - 1)) m.functions[std::get<0>(key)][std::get<1>(key)] = std::get<2>(key);
  for (const auto& [p, a] : preds) m.predicates.try_emplace(p);
  return m;
}

}  // namespace

bool evaluate(const Model& m, const Formula& f) {
  std::map<std::string, int> env;
  return eval(m, f, env);
}

std::string print_model(const Model& m) {
  std::ostringstream out;
  out << "domain {";
  for (int i = 0; i < m.size; ++i) out << (i ? ", " : "") << i;
  out << "}\n";
  for (const auto& [f, table] : m.functions)
    for (const auto& [args, v] : table) {
      out << f;
      if (!args.empty()) {
        out << '(';
        for (std::size_t i = 0; i < args.size(); ++i) out << (i ? "," : "") << args[i];
        out << ')';
      }
      out << " = " << v << '\n';
    }
  for (const auto& [p, table] : m.predicates) {
    std::vector<std::string> rows;
    for (const auto& [args, v] : table) {
      if (!v) continue;
      std::string r = p;
      if (!args.empty()) {
        r += '(';
        for (std::size_t i = 0; i < args.size(); ++i) r += (i ? "," : "") + std::to_string(args[i]);
        r += ')';
      }
      rows.push_back(r);
    }
    if (rows.empty()) {
      out << p << ": false everywhere\n";
      continue;
    }
    for (const auto& r : rows) out << r << '\n';
  }
  return out.str();
}

std::optional<Model> find_countermodel(const Formula& f, int max_domain, std::chrono::milliseconds timeout) {
  Formula g = Formula::negation(universal_closure(f));
  if (!is_first_order(g)) throw FragmentError("countermodel search needs a first-order formula");
  auto deadline = Clock::now() + timeout;
  ClausalForm cf;
  try {
    cf = clausify(g, ClausifyMode::Definitional);
  } catch (const FragmentError&) {
    return std::nullopt;
  }
  std::vector<FlatClause> flat;
  std::map<std::string, int> preds, funs;
  std::vector<std::string> constants;
  for (const auto& c : cf.clauses) {
    flat.push_back(flatten(c));
    for (const auto& l : flat.back().lits) {
      if (l.kind == FlatLit::Pred) preds[l.name] = static_cast<int>(l.vars.size());
      if (l.kind == FlatLit::Fun) {
        int a = static_cast<int>(l.vars.size()) - 1;
        if (!funs.contains(l.name) && a == 0) constants.push_back(l.name);
        funs[l.name] = a;
      }
    }
  }
  // Symbols of f the clauses lost still get a default interpretation.
  for (const auto& [p, a] : predicate_arities(g)) {
    if (p != "=" && !preds.contains(p) && !a.empty()) preds[p] = *a.begin();
  }
  for (int n = 1; n <= max_domain; ++n) {
    bool timed_out = false;
    auto m = model_of_size(flat, preds, funs, constants, n, deadline, timed_out);
    if (timed_out) return std::nullopt;
    if (!m) continue;
    if (!evaluate(*m, g)) continue;
    if (model_observer) model_observer(*m, g);
    return m;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validity

Formula reduce_so_universal(const Formula& f) {
  FreshNames names(f);
  std::function<Formula(const Formula&, bool)> go = [&](const Formula& g, bool positive) -> Formula {
    using C = Connective;
    switch (g.op()) {
      case C::Not:
        return Formula::negation(go(g.body(), !positive));
      case C::Implies:
        return Formula::implies(go(g.lhs(), !positive), go(g.rhs(), positive));
      case C::Iff:
        if (!is_first_order(g)) throw FragmentError("second-order quantifier under an equivalence");
        return g;
      case C::And:
      case C::Or: {
        std::vector<Formula> cs;
        for (const auto& c : g.children()) cs.push_back(go(c, positive));
        return g.with_children(std::move(cs));
      }
      case C::Forall:
      case C::Exists:
        return g.with_body(go(g.body(), positive));
      case C::Forall2:
      case C::Exists2: {
        if (g.is(C::Forall2) != positive) throw FragmentError("second-order quantifier in a non-reducible position");
        Formula body = g.body();
        for (const auto& p : g.preds()) body = rename_predicate(body, p, names.like(p.name));
        return go(body, positive);
      }
      default:
        return g;
    }
  };
  return go(f, true);
}

namespace {

ClausalForm proof_clauses(const Formula& f, FreshNames& names) {
  ClausalForm cf = clausify(f, ClausifyMode::Equivalence, names);
  if (cf.clauses.size() > 256) cf = clausify(f, ClausifyMode::Definitional, names);
  return cf;
}

}  // namespace

ValidationResult validate(const Formula& f, const ProverConfig& cfg) {
  Formula g = f;
  try {
    if (!is_first_order(g)) g = reduce_so_universal(g);
    if (!is_first_order(g)) return Failed{"not first-order"};
    g = universal_closure(g);
    if (auto m = find_countermodel(g, cfg.max_domain, cfg.timeout)) return NotValid{*m};
    FreshNames names(g);
    ClausalForm left, right;
    if (g.is(Connective::Implies)) {
      left = proof_clauses(g.lhs(), names);
      right = proof_clauses(Formula::negation(g.rhs()), names);
    } else {
      right = proof_clauses(Formula::negation(g), names);
    }
    if (auto t = prove(left, right, cfg)) return Valid{std::move(*t)};
  } catch (const FragmentError& e) {
    return Failed{e.what()};
  }
  return Failed{"no proof found within the resource bounds"};
}

}  // namespace pie
