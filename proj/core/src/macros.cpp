#include "pie/macros.hpp"

#include <algorithm>
#include <cctype>

#include "pie/error.hpp"

namespace pie {

namespace {

using K = Syntax::Kind;
using Bindings = std::map<std::string, Syntax>;

bool capitalized(std::string_view n) {
  return !n.empty() && (std::isupper(static_cast<unsigned char>(n[0])) || n[0] == '_');
}

std::string where(SourcePosition p) { return std::to_string(p.line) + ":" + std::to_string(p.column) + ": "; }

bool is_binder(const Syntax& s) {
  if (s.kind != K::Compound || s.functor_is_variable || s.args.size() != 2) return false;
  return s.name == "all" || s.name == "ex" || s.name == "lambda" || s.name == "all2" || s.name == "ex2";
}

void placeholders(const Syntax& s, std::set<std::string>& out) {
  if (s.kind == K::Variable && s.name != "_") out.insert(s.name);
  if (s.kind == K::Compound && s.functor_is_variable) out.insert(s.name);
  for (const auto& a : s.args) placeholders(a, out);
  for (const auto& a : s.tail) placeholders(a, out);
}

// Placeholders standing for bound variables or quantified predicates, with
// whether they name predicates.
void binder_placeholders(const Syntax& s, std::map<std::string, bool>& out) {
  if (is_binder(s)) {
    bool preds = s.name == "all2" || s.name == "ex2";
    std::set<std::string> vs;
    placeholders(s.args[0], vs);
    for (const auto& v : vs) out.emplace(v, preds);
  }
  for (const auto& a : s.args) binder_placeholders(a, out);
  for (const auto& a : s.tail) binder_placeholders(a, out);
}

struct StepShape {
  std::vector<std::string> names;
  std::size_t arity;
  std::vector<std::size_t> outputs;
};

const StepShape& shape(BuiltinCall::Kind k) {
  static const StepShape shapes[] = {
      {{"mac_rename_free_predicate", "rename_free_predicate"}, 5, {3, 4}},
      {{"mac_get_arity", "get_arity"}, 3, {2}},
      {{"mac_transfer_clauses", "transfer_clauses"}, 4, {3}},
      {{"last_ppl_result", "last_result"}, 1, {0}},
  };
  return shapes[static_cast<int>(k)];
}

BuiltinCall read_step(const Syntax& s) {
  for (auto k : {BuiltinCall::Kind::RenameFreePredicate, BuiltinCall::Kind::GetArity,
                 BuiltinCall::Kind::TransferClauses, BuiltinCall::Kind::LastResult}) {
    const auto& sh = shape(k);
    if (s.kind != K::Compound || s.functor_is_variable) break;
    if (std::find(sh.names.begin(), sh.names.end(), s.name) == sh.names.end()) continue;
    if (s.args.size() != sh.arity)
      throw MacroError(where(s.pos) + s.name + " expects " + std::to_string(sh.arity) + " arguments");
    return {k, s.args, s.pos};
  }
  throw MacroError(where(s.pos) + "unknown builtin step " + print_syntax(s));
}

void flatten_steps(const Syntax& s, std::vector<BuiltinCall>& out) {
  if (s.is_compound(",", 2)) {
    flatten_steps(s.args[0], out);
    flatten_steps(s.args[1], out);
    return;
  }
  if (s.is_atom("true")) return;
  out.push_back(read_step(s));
}

Syntax strip_macro_mark(const Syntax& s) {
  if (s.is_compound("$macro", 1)) return s.args[0];
  return s;
}

bool match(const Syntax& pattern, const Syntax& actual0, Bindings& b) {
  if (pattern.kind == K::Variable) {
    if (pattern.name == "_") return true;
    auto it = b.find(pattern.name);
    if (it == b.end()) {
      b.emplace(pattern.name, actual0);
      return true;
    }
    return it->second == actual0;
  }
  const Syntax actual = strip_macro_mark(actual0);
  switch (pattern.kind) {
    case K::Atom:
      return actual.kind == K::Atom && actual.name == pattern.name;
    case K::Compound:
      if (actual.kind != K::Compound || actual.name != pattern.name ||
          actual.functor_is_variable != pattern.functor_is_variable || actual.args.size() != pattern.args.size())
        return false;
      for (std::size_t i = 0; i < pattern.args.size(); ++i)
        if (!match(pattern.args[i], actual.args[i], b)) return false;
      return true;
    case K::List: {
      if (actual.kind != K::List) return false;
      std::size_t n = pattern.args.size();
      if (pattern.tail.empty()) {
        if (actual.args.size() != n || !actual.tail.empty()) return false;
      } else if (actual.args.size() < n) {
        return false;
      }
      for (std::size_t i = 0; i < n; ++i)
        if (!match(pattern.args[i], actual.args[i], b)) return false;
      if (pattern.tail.empty()) return true;
      Syntax rest = Syntax::list({actual.args.begin() + static_cast<std::ptrdiff_t>(n), actual.args.end()});
      rest.tail = actual.tail;
      return match(pattern.tail.front(), rest, b);
    }
    default:
      return false;
  }
}

Syntax substitute(const Syntax& s, const Bindings& b) {
  if (s.kind == K::Variable) {
    auto it = b.find(s.name);
    return it == b.end() ? s : it->second;
  }
  Syntax out = s;
  for (auto& a : out.args) a = substitute(a, b);
  for (auto& a : out.tail) a = substitute(a, b);
  if (s.kind == K::Compound && s.functor_is_variable) {
    auto it = b.find(s.name);
    if (it == b.end()) return out;
    const Syntax head = strip_macro_mark(it->second);
    if (head.kind == K::Atom) {
      Syntax c = Syntax::compound(head.name, out.args);
      c.pos = s.pos;
      return c;
    }
    std::vector<Syntax> args{it->second};
    args.insert(args.end(), out.args.begin(), out.args.end());
    return Syntax::compound("$apply", std::move(args));
  }
  return out;
}

std::string lowercase(std::string_view n) {
  std::string out;
  for (char c : n)
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  while (!out.empty() && out.front() == '_') out.erase(out.begin());
  return out.empty() ? "x" : out;
}

std::vector<std::string> fresh_variables(int n) {
  static const char* preferred[] = {"x", "y", "z", "u", "v", "w"};
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(i < 6 ? preferred[i] : "x" + std::to_string(i - 5));
  return out;
}

struct Expander {
  const MacroTable& table;
  MacroContext& ctx;
  FreshNames names;

  ReadOptions options(const std::set<std::string>& scope) const { return {&table.signatures(), scope}; }

  Formula formula_of(const Syntax& s, const std::set<std::string>& scope, int depth) {
    Formula f = read_formula(s, options(scope));
    names.reserve(f);
    return expand(f, scope, depth);
  }

  std::string name_of(const Syntax& s0) const {
    Syntax s = strip_macro_mark(s0);
    if (s.kind == K::Embedded && s.embedded->is(Connective::Atom) && s.embedded->terms().empty())
      return s.embedded->name();
    if (s.kind == K::Embedded && s.embedded->is(Connective::MacroCall) && s.embedded->terms().empty())
      return s.embedded->name();
    if (s.kind != K::Atom) throw MacroError(where(s.pos) + "expected a symbol, got " + print_syntax(s));
    return s.name;
  }

  std::vector<Syntax> items_of(const Syntax& s) const {
    if (s.kind != K::List || !s.tail.empty()) throw MacroError(where(s.pos) + "expected a list, got " + print_syntax(s));
    return s.args;
  }

  PredicateSpec spec_of(const Syntax& s) const {
    if (s.is_compound("/", 2)) {
      const std::string a = name_of(s.args[1]);
      if (a.empty() || !std::all_of(a.begin(), a.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw MacroError(where(s.pos) + "arity must be a number: " + a);
      return {name_of(s.args[0]), std::stoi(a)};
    }
    return {name_of(s), std::nullopt};
  }

  void run_step(const BuiltinCall& step, Bindings& b, const std::set<std::string>& scope, int depth) {
    std::vector<Syntax> args;
    for (const auto& a : step.args) args.push_back(substitute(a, b));
    auto bind = [&](std::size_t i, Syntax value) {
      const Syntax& target = step.args[i];
      if (target.kind != K::Variable) throw MacroError(where(step.pos) + "builtin output must be a placeholder");
      b.insert_or_assign(target.name, std::move(value));
    };
    switch (step.kind) {
      case BuiltinCall::Kind::RenameFreePredicate: {
        Formula f = formula_of(args[0], scope, depth);
        auto [g, p] = builtin_rename_free_predicate(f, spec_of(args[1]), name_of(args[2]), names);
        bind(3, Syntax::embed(g));
        bind(4, Syntax::atom(p));
        return;
      }
      case BuiltinCall::Kind::GetArity: {
        Formula f = formula_of(args[1], scope, depth);
        bind(2, Syntax::atom(std::to_string(builtin_get_arity(name_of(args[0]), f))));
        return;
      }
      case BuiltinCall::Kind::TransferClauses: {
        std::vector<TransferSpec> specs;
        for (const auto& item : items_of(args[0])) {
          if (item.is_compound("-", 2))
            specs.push_back({spec_of(item.args[0]), name_of(item.args[1])});
          else
            specs.push_back({spec_of(item), "n"});
        }
        std::vector<PredicateSpec> primed;
        for (const auto& item : items_of(args[2])) primed.push_back(spec_of(item));
        bind(3, Syntax::embed(builtin_transfer_clauses(specs, name_of(args[1]), primed)));
        return;
      }
      case BuiltinCall::Kind::LastResult:
        if (!ctx.last_result) throw MacroError(where(step.pos) + "no previous reasoner result");
        bind(0, Syntax::embed(*ctx.last_result));
        return;
    }
  }

  std::optional<Formula> try_definition(const MacroDefinition& def, const std::vector<Syntax>& actual,
                                        const std::set<std::string>& scope, int depth) {
    Bindings b;
    for (std::size_t i = 0; i < actual.size(); ++i)
      if (!match(def.params[i], actual[i], b)) return std::nullopt;
    for (const auto& step : def.steps) run_step(step, b, scope, depth);
    std::map<std::string, bool> fresh;
    binder_placeholders(def.body, fresh);
    for (const auto& [v, pred] : fresh) {
      if (b.contains(v)) continue;
      std::string n = names.like(lowercase(v));
      names.reserve(n);
      b.emplace(v, Syntax::atom(n));
    }
    Formula f = read_formula(substitute(def.body, b), options(scope));
    names.reserve(f);
    return expand(f, scope, depth + 1);
  }

  Formula call(const Formula& f, const std::set<std::string>& scope, int depth) {
    if (depth > ctx.max_depth)
      throw MacroError("macro expansion depth " + std::to_string(ctx.max_depth) + " exceeded at " + f.name());
    const auto& defs = table.lookup(f.name(), static_cast<int>(f.terms().size()));
    if (defs.empty()) {
      if (capitalized(f.name())) throw MacroError("unbound placeholder " + f.name());
      throw MacroError("no definition for macro " + f.name() + "/" + std::to_string(f.terms().size()));
    }
    std::vector<Syntax> actual;
    for (const auto& t : f.terms()) actual.push_back(decode_term(t, true));
    for (const auto& def : defs)
      if (auto r = try_definition(def, actual, scope, depth)) return *r;
    throw MacroError("no matching definition for macro call " + print_formula(f));
  }

  Formula expand(const Formula& f, const std::set<std::string>& scope, int depth) {
    using C = Connective;
    switch (f.op()) {
      case C::MacroCall:
        return call(f, scope, depth);
      case C::Apply: {
        Formula head = expand(f.body(), scope, depth);
        if (!head.is(C::Lambda)) throw MacroError("application of a non-λ formula " + print_formula(f));
        return beta_reduce(Formula::apply(head, f.terms()));
      }
      case C::Forall:
      case C::Exists:
      case C::Lambda: {
        auto inner = scope;
        inner.insert(f.vars().begin(), f.vars().end());
        return f.with_body(expand(f.body(), inner, depth));
      }
      default: {
        if (f.children().empty()) return f;
        std::vector<Formula> cs;
        bool changed = false;
        for (const auto& c : f.children()) {
          cs.push_back(expand(c, scope, depth));
          changed = changed || !(cs.back() == c);
        }
        return changed ? f.with_children(std::move(cs)) : f;
      }
    }
  }
};

}  // namespace

void MacroTable::define(MacroDefinition def) {
  std::set<std::string> bound;
  for (const auto& p : def.params) placeholders(p, bound);
  for (const auto& step : def.steps) {
    const auto& sh = shape(step.kind);
    for (std::size_t i = 0; i < step.args.size(); ++i) {
      if (std::find(sh.outputs.begin(), sh.outputs.end(), i) != sh.outputs.end()) continue;
      std::set<std::string> used;
      placeholders(step.args[i], used);
      for (const auto& v : used)
        if (!bound.contains(v))
          throw MacroError(where(step.pos) + "step of " + def.name + " uses unbound placeholder " + v);
    }
    for (auto i : sh.outputs) placeholders(step.args[i], bound);
  }
  std::set<std::string> used;
  placeholders(def.body, used);
  std::map<std::string, bool> fresh;
  binder_placeholders(def.body, fresh);
  for (const auto& v : used)
    if (!bound.contains(v) && !fresh.contains(v))
      throw MacroError(where(def.body.pos) + "placeholder " + v + " of " + def.name + " is never bound");

  auto key = std::make_pair(def.name, def.arity());
  auto& list = defs_[key];
  signatures_.insert(key);
  for (auto& old : list)
    if (old.params == def.params) {
      old = std::move(def);
      return;
    }
  list.push_back(std::move(def));
}

const std::vector<MacroDefinition>& MacroTable::lookup(const std::string& name, int arity) const {
  static const std::vector<MacroDefinition> none;
  auto it = defs_.find({name, arity});
  return it == defs_.end() ? none : it->second;
}

MacroTable define_macro(MacroTable table, MacroDefinition def) {
  table.define(std::move(def));
  return table;
}

MacroDefinition read_definition(const Syntax& clause) {
  if (!clause.is_compound("::", 2) || !clause.args[0].is_compound("def", 1))
    throw MacroError(where(clause.pos) + "expected def(Head) :: Body");
  MacroDefinition def;
  def.source = clause;
  const Syntax& head = clause.args[0].args[0];
  if (head.kind == K::Atom) {
    def.name = head.name;
  } else if (head.kind == K::Compound && !head.functor_is_variable) {
    def.name = head.name;
    def.params = head.args;
  } else {
    throw MacroError(where(head.pos) + "malformed macro head " + print_syntax(head));
  }
  const Syntax& rest = clause.args[1];
  if (rest.is_compound("::-", 2)) {
    def.body = rest.args[0];
    flatten_steps(rest.args[1], def.steps);
  } else {
    def.body = rest;
  }
  return def;
}

Formula expand(const MacroTable& table, const Formula& f, MacroContext& ctx) {
  Expander e{table, ctx, FreshNames(f)};
  return beta_reduce(e.expand(f, {}, 0));
}

Formula parse_with_macros(const MacroTable& table, std::string_view src) {
  ReadOptions opts;
  opts.macros = &table.signatures();
  return parse_formula(src, opts);
}

Formula read_with_macros(const MacroTable& table, const Syntax& s) {
  ReadOptions opts;
  opts.macros = &table.signatures();
  return read_formula(s, opts);
}

std::pair<Formula, std::string> builtin_rename_free_predicate(const Formula& f, const PredicateSpec& p,
                                                              std::string_view mode, FreshNames& names) {
  if (mode != "pn") throw MacroError("unsupported polarity mode " + std::string(mode) + " (only pn)");
  if (!occurs_free(f, p.name)) throw MacroError("predicate " + p.name + " does not occur free");
  names.reserve(f);
  std::string q = names.predicate();
  names.reserve(q);
  return {rename_predicate(f, p, q), q};
}

int builtin_get_arity(const std::string& p, const Formula& f) {
  auto arities = predicate_arities(f);
  auto it = arities.find(p);
  if (it == arities.end()) throw MacroError("predicate " + p + " does not occur");
  if (it->second.size() != 1) throw MacroError("predicate " + p + " has more than one arity");
  return *it->second.begin();
}

Formula builtin_transfer_clauses(const std::vector<TransferSpec>& specs, std::string_view direction,
                                 const std::vector<PredicateSpec>& primed) {
  if (direction != "p" && direction != "n")
    throw MacroError("unsupported transfer direction " + std::string(direction));
  if (specs.size() != primed.size()) throw ArityError("transfer_clauses: lists of different length");
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    if (s.tag != "n") throw MacroError("unsupported transfer tag " + s.tag);
    if (!s.predicate.arity) throw ArityError("transfer_clauses needs the arity of " + s.predicate.name);
    if (primed[i].arity && primed[i].arity != s.predicate.arity)
      throw ArityError("transfer_clauses: arity mismatch for " + primed[i].name);
    auto xs = fresh_variables(*s.predicate.arity);
    std::vector<Term> args;
    for (const auto& x : xs) args.push_back(Term::variable(x));
    Formula orig = Formula::atom(s.predicate.name, args);
    Formula copy = Formula::atom(primed[i].name, args);
    parts.push_back(Formula::forall(xs, direction == "p" ? Formula::implies(copy, orig) : Formula::implies(orig, copy)));
  }
  return Formula::conjunction(std::move(parts));
}

}  // namespace pie
