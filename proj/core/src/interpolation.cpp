#include "pie/interpolation.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "pie/error.hpp"
#include "pie/preprocess.hpp"
#include "pie/syntax.hpp"

namespace pie {

namespace {

ClausalForm side_clauses(const Formula& f, FreshNames& names) {
  ClausalForm cf = clausify(f, ClausifyMode::Equivalence, names);
  if (cf.clauses.size() > 256) cf = clausify(f, ClausifyMode::Definitional, names);
  return cf;
}

SymbolSet clause_functions(const ClausalForm& cf) {
  SymbolSet out;
  for (const auto& c : cf.clauses)
    for (const auto& l : c.literals)
      for (const auto& a : l.args) a.collect_functors(out);
  return out;
}

std::set<std::string> predicate_names(const Formula& f) {
  std::set<std::string> out;
  for (const auto& [p, arities] : predicate_arities(f)) out.insert(p);
  return out;
}

Formula ipol(const TableauNode& n, std::vector<const TableauNode*>& path) {
  if (n.children.empty()) {
    if (n.is_root()) return n.side == Side::Left ? Formula::falsity() : Formula::truth();
    const TableauNode* p = path[path.size() - n.partner];
    if (n.side == Side::Left && p->side == Side::Left) return Formula::falsity();
    if (n.side == Side::Right && p->side == Side::Right) return Formula::truth();
    return literal_formula(n.side == Side::Left ? n.literal : p->literal);
  }
  path.push_back(&n);
  std::vector<Formula> parts;
  for (const auto& c : n.children) parts.push_back(ipol(c, path));
  path.pop_back();
  bool left = n.children.front().side == Side::Left;
  return simplify_constants(left ? Formula::disjunction(std::move(parts)) : Formula::conjunction(std::move(parts)));
}

void alien_terms(const Term& t, const SymbolSet& shared, std::vector<Term>& out) {
  if (t.is_variable()) return;
  if (!shared.contains({t.name(), static_cast<int>(t.arity())})) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (const auto& a : t.args()) alien_terms(a, shared, out);
}

void alien_terms(const Formula& f, const SymbolSet& shared, std::vector<Term>& out) {
  if (f.is(Connective::Atom) || f.is(Connective::Equal)) {
    for (const auto& t : f.terms()) alien_terms(t, shared, out);
    return;
  }
  for (const auto& c : f.children()) alien_terms(c, shared, out);
}

}  // namespace

Formula extract_from_tableau(const Tableau& t) {
  if (auto err = check_tableau(t)) throw TableauError("malformed tableau: " + *err);
  std::vector<const TableauNode*> path;
  if (t.root.children.empty()) {
    if (t.root.clause < 0) throw TableauError("tableau without start clause");
    return t.sides[t.root.clause] == Side::Left ? Formula::falsity() : Formula::truth();
  }
  return ipol(t.root, path);
}

Formula generalize_constants(const Formula& h, const SymbolSet& left_functions, const SymbolSet& right_functions) {
  SymbolSet shared;
  for (const auto& s : left_functions)
    if (right_functions.contains(s)) shared.insert(s);
  std::vector<Term> aliens;
  alien_terms(h, shared, aliens);
  if (aliens.empty()) return h;
  std::stable_sort(aliens.begin(), aliens.end(), [](const Term& a, const Term& b) { return a.size() < b.size(); });

  FreshNames names(h);
  std::vector<std::string> vars;
  static const char* preferred[] = {"x", "y", "z", "u", "v", "w"};
  for (std::size_t i = 0; i < aliens.size(); ++i) {
    std::string v;
    for (const char* c : preferred)
      if (!names.used(c)) {
        v = c;
        break;
      }
    if (v.empty()) v = names.like("x");
    names.reserve(v);
    vars.push_back(v);
  }
  Formula body = h;
  // Larger terms first so their subterms are still intact when replaced.
  for (std::size_t i = aliens.size(); i-- > 0;) body = replace_term(body, aliens[i], Term::variable(vars[i]));
  for (std::size_t i = aliens.size(); i-- > 0;) {
    const Term& t = aliens[i];
    // Symbols of neither side (placeholders for unconstrained variables) may
    // be quantified either way.
    bool universal = right_functions.contains({t.name(), static_cast<int>(t.arity())}) &&
                     !left_functions.contains({t.name(), static_cast<int>(t.arity())});
    body = universal ? Formula::forall({vars[i]}, body) : Formula::exists({vars[i]}, body);
  }
  return body;
}

Interpolant interpolate(const Formula& left, const Formula& right, const ProverConfig& cfg, const InterpolationOptions& opts) {
  if (!is_first_order(left) || !is_first_order(right)) throw FragmentError("interpolation needs first-order sides");
  FreshNames names(left);
  names.reserve(right);
  ClausalForm lcf = side_clauses(left, names);
  ClausalForm rcf = side_clauses(Formula::negation(right), names);
  if (opts.simplify_sides) {
    ProtectedVocabulary shared;
    auto lp = predicate_names(left);
    for (const auto& p : predicate_names(right))
      if (lp.contains(p)) shared.predicates.insert(p);
    lcf = simplify_clausal(lcf, shared);
    rcf = simplify_clausal(rcf, shared);
  }
  auto proof = prove(lcf, rcf, cfg);
  if (!proof) {
    auto model = find_countermodel(Formula::implies(left, right), cfg.max_domain, cfg.timeout);
    if (model) throw InterpolationError("implication is not valid:\n" + print_model(*model), true);
    throw InterpolationError("no proof found within the resource bounds", false);
  }
  Formula h = simplify_formula(extract_from_tableau(*proof));
  SymbolSet lf = function_symbols(left), rf = function_symbols(right);
  for (const auto& s : clause_functions(lcf)) lf.insert(s);
  for (const auto& s : clause_functions(rcf)) rf.insert(s);
  h = simplify_formula(generalize_constants(h, lf, rf));
  return {h, std::move(*proof)};
}

Interpolant interpolate(const Formula& implication, const ProverConfig& cfg, const InterpolationOptions& opts) {
  Formula f = is_first_order(implication) ? implication : reduce_so_universal(implication);
  if (!f.is(Connective::Implies)) throw FragmentError("interpolation expects an implication F -> G");
  return interpolate(f.lhs(), f.rhs(), cfg, opts);
}

std::vector<Formula> symmetric_interpolate(const std::vector<Formula>& parts, const ProverConfig& cfg) {
  std::vector<Formula> hs;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<Formula> rest(hs.begin(), hs.end());
    for (std::size_t j = i + 1; j < parts.size(); ++j) rest.push_back(parts[j]);
    Formula right = Formula::negation(Formula::conjunction(std::move(rest)));
    hs.push_back(interpolate(parts[i], right, cfg).formula);
  }
  return hs;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string emit_tableau_dot(const Tableau& t) {
  std::ostringstream out;
  out << "digraph tableau {\n";
  out << "  node [shape=box, style=filled, fontname=\"Helvetica\"];\n";
  out << "  edge [arrowhead=none];\n";
  int next = 0;
  std::vector<int> ids;
  std::function<void(const TableauNode&)> walk = [&](const TableauNode& n) {
    int id = next++;
    if (n.is_root())
      out << "  n" << id << " [shape=point, label=\"\"];\n";
    else
      out << "  n" << id << " [label=\"" << dot_escape(print_formula(literal_formula(n.literal))) << "\", fillcolor=\""
          << (n.side == Side::Left ? "white" : "gray80") << "\"];\n";
    if (!ids.empty()) out << "  n" << ids.back() << " -> n" << id << ";\n";
    if (n.closure == TableauNode::Closure::Ancestor && n.partner >= 1 && n.partner <= static_cast<int>(ids.size()))
      out << "  n" << id << " -> n" << ids[ids.size() - n.partner] << " [style=dashed, constraint=false, label=\""
          << (n.partner_side == Side::Left ? "L" : "R") << "\"];\n";
    ids.push_back(id);
    for (const auto& c : n.children) walk(c);
    ids.pop_back();
  };
  walk(t.root);
  out << "}\n";
  return out.str();
}

}  // namespace pie
