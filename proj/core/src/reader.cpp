#include <cctype>

#include "pie/syntax.hpp"

namespace pie {

namespace {

bool capitalized(std::string_view n) {
  return !n.empty() && (std::isupper(static_cast<unsigned char>(n[0])) || n[0] == '_');
}

[[noreturn]] void fail(const Syntax& s, const std::string& msg) { throw SyntaxError(s.pos, msg); }

bool is_macro(const ReadOptions& opts, const std::string& name, std::size_t arity) {
  return opts.macros && opts.macros->contains({name, static_cast<int>(arity)});
}

std::vector<std::string> read_names(const Syntax& s) {
  std::vector<std::string> out;
  auto one = [&](const Syntax& n) {
    if (n.kind != Syntax::Kind::Atom && n.kind != Syntax::Kind::Variable) fail(n, "expected a symbol");
    out.push_back(n.name);
  };
  if (s.kind == Syntax::Kind::List) {
    if (!s.tail.empty()) fail(s, "open list not allowed here");
    for (const auto& a : s.args) one(a);
  } else {
    one(s);
  }
  return out;
}

Term read_term_rec(const Syntax& s, const std::set<std::string>& bound) {
  switch (s.kind) {
    case Syntax::Kind::Atom:
      return bound.contains(s.name) ? Term::variable(s.name) : Term::constant(s.name);
    case Syntax::Kind::Variable:
      return Term::variable(s.name);
    case Syntax::Kind::Compound: {
      if (s.functor_is_variable) fail(s, "variable functor in term position");
      if (s.name == "$quoted") fail(s, "quoted atom in a formula");
      std::vector<Term> args;
      args.reserve(s.args.size());
      for (const auto& a : s.args) args.push_back(read_term_rec(a, bound));
      return Term::compound(s.name, std::move(args));
    }
    case Syntax::Kind::List:
      return encode_syntax(s, {nullptr, bound});
    case Syntax::Kind::Embedded:
      break;
  }
  fail(s, "formula where a term is expected");
}

std::vector<Term> read_terms(const std::vector<Syntax>& args, const std::set<std::string>& bound,
                             std::size_t from = 0) {
  std::vector<Term> out;
  for (std::size_t i = from; i < args.size(); ++i) out.push_back(read_term_rec(args[i], bound));
  return out;
}

std::vector<Term> encode_args(const std::vector<Syntax>& args, const ReadOptions& opts) {
  std::vector<Term> out;
  out.reserve(args.size());
  for (const auto& a : args) out.push_back(encode_syntax(a, opts));
  return out;
}

Formula read_rec(const Syntax& s, const ReadOptions& opts) {
  using K = Syntax::Kind;
  switch (s.kind) {
    case K::Embedded:
      return *s.embedded;
    case K::Variable:
      return Formula::macro_call(s.name);
    case K::List:
      fail(s, "list where a formula is expected");
    case K::Atom:
      if (s.name == "true") return Formula::truth();
      if (s.name == "false") return Formula::falsity();
      if (is_macro(opts, s.name, 0)) return Formula::macro_call(s.name);
      return Formula::atom(s.name);
    case K::Compound:
      break;
  }
  const auto& a = s.args;
  if (s.functor_is_variable) return Formula::apply(Formula::macro_call(s.name), read_terms(a, opts.bound_variables));
  const std::string& f = s.name;
  if (f == "$quoted") fail(s, "quoted atom in a formula");
  if (a.size() == 2) {
    if (f == "," || f == ";") {
      std::vector<Formula> parts{read_rec(a[0], opts), read_rec(a[1], opts)};
      return f == "," ? Formula::conjunction(std::move(parts)) : Formula::disjunction(std::move(parts));
    }
    if (f == "->") return Formula::implies(read_rec(a[0], opts), read_rec(a[1], opts));
    if (f == "<->") return Formula::iff(read_rec(a[0], opts), read_rec(a[1], opts));
    if (f == "=" || f == "\\=") {
      auto eq = Formula::equal(read_term_rec(a[0], opts.bound_variables), read_term_rec(a[1], opts.bound_variables));
      return f == "=" ? eq : Formula::negation(eq);
    }
    if (f == "all" || f == "ex" || f == "lambda") {
      auto vars = read_names(a[0]);
      if (f == "lambda" && a[0].kind != K::List) fail(a[0], "λ parameters must be a list");
      ReadOptions inner = opts;
      inner.bound_variables.insert(vars.begin(), vars.end());
      auto body = read_rec(a[1], inner);
      if (f == "all") return Formula::forall(std::move(vars), std::move(body));
      if (f == "ex") return Formula::exists(std::move(vars), std::move(body));
      return Formula::lambda(std::move(vars), std::move(body));
    }
    if (f == "all2" || f == "ex2") {
      auto preds = read_predicate_list(a[0]);
      auto body = read_rec(a[1], opts);
      return f == "all2" ? Formula::forall2(std::move(preds), std::move(body))
                         : Formula::exists2(std::move(preds), std::move(body));
    }
  }
  if (f == "~" && a.size() == 1) return Formula::negation(read_rec(a[0], opts));
  if (f == "$apply" && !a.empty()) {
    const Syntax& head = a[0];
    auto args = read_terms(a, opts.bound_variables, 1);
    if (head.kind == K::Atom) {
      if (is_macro(opts, head.name, args.size())) {
        std::vector<Syntax> rest(a.begin() + 1, a.end());
        return Formula::macro_call(head.name, encode_args(rest, opts));
      }
      return Formula::atom(head.name, std::move(args));
    }
    return beta_reduce(Formula::apply(read_rec(head, opts), std::move(args)));
  }
  if (f == "$macro" && a.size() == 1) {
    const Syntax& inner = a[0];
    if (inner.kind == K::Atom) return Formula::macro_call(inner.name);
    if (inner.kind == K::Compound) return Formula::macro_call(inner.name, encode_args(inner.args, opts));
    fail(inner, "malformed macro call");
  }
  if (is_macro(opts, f, a.size())) return Formula::macro_call(f, encode_args(a, opts));
  return Formula::atom(f, read_terms(a, opts.bound_variables));
}

Syntax names_syntax(const std::vector<std::string>& names, bool force_list) {
  auto one = [](const std::string& n) { return capitalized(n) ? Syntax::variable(n) : Syntax::atom(n); };
  if (names.size() == 1 && !force_list) return one(names[0]);
  std::vector<Syntax> items;
  for (const auto& n : names) items.push_back(one(n));
  return Syntax::list(std::move(items));
}

Syntax preds_syntax(const std::vector<PredicateSpec>& preds) {
  std::vector<std::string> names;
  for (const auto& p : preds) names.push_back(p.name);
  return names_syntax(names, false);
}

Syntax nest(const std::string& op, const std::vector<Formula>& fs) {
  Syntax acc = formula_to_syntax(fs.back());
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Syntax::compound(op, {formula_to_syntax(fs[i]), std::move(acc)});
  return acc;
}

}  // namespace

Term encode_syntax(const Syntax& s, const ReadOptions& opts) {
  using K = Syntax::Kind;
  switch (s.kind) {
    case K::Atom:
      if (is_macro(opts, s.name, 0)) return Term::compound("$macro", {Term::constant(s.name)});
      return opts.bound_variables.contains(s.name) ? Term::variable(s.name) : Term::constant(s.name);
    case K::Variable:
      return Term::variable(s.name);
    case K::List: {
      auto items = encode_args(s.args, opts);
      if (s.tail.empty()) return Term::compound("[]", std::move(items));
      items.push_back(encode_syntax(s.tail.front(), opts));
      return Term::compound("[|]", std::move(items));
    }
    case K::Embedded:
      return encode_syntax(formula_to_syntax(*s.embedded), {});
    case K::Compound:
      break;
  }
  if (s.functor_is_variable) {
    std::vector<Term> args{Term::variable(s.name)};
    for (auto& t : encode_args(s.args, opts)) args.push_back(std::move(t));
    return Term::compound("$apply", std::move(args));
  }
  // Quantifier binders scope over the body here as well.
  if ((s.name == "all" || s.name == "ex" || s.name == "lambda") && s.args.size() == 2) {
    ReadOptions inner = opts;
    std::vector<std::string> vars;
    try {
      vars = read_names(s.args[0]);
    } catch (const SyntaxError&) {
    }
    inner.bound_variables.insert(vars.begin(), vars.end());
    return Term::compound(s.name, {encode_syntax(s.args[0], {}), encode_syntax(s.args[1], inner)});
  }
  auto args = encode_args(s.args, opts);
  if (is_macro(opts, s.name, s.args.size()))
    return Term::compound("$macro", {Term::compound(s.name, std::move(args))});
  return Term::compound(s.name, std::move(args));
}

Syntax term_to_syntax(const Term& t) { return decode_term(t, false); }

Syntax decode_term(const Term& t, bool keep_macro_marks) {
  if (t.is_variable()) return capitalized(t.name()) ? Syntax::variable(t.name()) : Syntax::atom(t.name());
  const auto& n = t.name();
  if (n == "[]" || n == "[|]") {
    std::vector<Syntax> items;
    for (const auto& a : t.args()) items.push_back(decode_term(a, keep_macro_marks));
    std::vector<Syntax> tail;
    if (n == "[|]" && !items.empty()) {
      tail.push_back(std::move(items.back()));
      items.pop_back();
    }
    Syntax s = Syntax::list(std::move(items));
    s.tail = std::move(tail);
    return s;
  }
  if (n == "$macro" && t.arity() == 1) {
    if (keep_macro_marks) return Syntax::compound(n, {decode_term(t.args()[0], true)});
    return decode_term(t.args()[0], false);
  }
  if (n == "$apply" && t.arity() >= 1 && t.args()[0].is_variable() && capitalized(t.args()[0].name())) {
    std::vector<Syntax> args;
    for (std::size_t i = 1; i < t.arity(); ++i) args.push_back(decode_term(t.args()[i], keep_macro_marks));
    Syntax s = Syntax::compound(t.args()[0].name(), std::move(args));
    s.functor_is_variable = true;
    return s;
  }
  if (t.is_constant()) return Syntax::atom(n);
  std::vector<Syntax> args;
  for (const auto& a : t.args()) args.push_back(decode_term(a, keep_macro_marks));
  return Syntax::compound(n, std::move(args));
}

Formula read_formula(const Syntax& s, const ReadOptions& opts) { return read_rec(s, opts); }

Term read_term(const Syntax& s, const std::set<std::string>& bound) { return read_term_rec(s, bound); }

std::vector<PredicateSpec> read_predicate_list(const Syntax& s) {
  std::vector<PredicateSpec> out;
  auto one = [&](const Syntax& n) {
    if (n.kind == Syntax::Kind::Atom || n.kind == Syntax::Kind::Variable) {
      out.push_back({n.name, std::nullopt});
    } else if (n.is_compound("/", 2) && n.args[1].kind == Syntax::Kind::Atom &&
               std::isdigit(static_cast<unsigned char>(n.args[1].name[0]))) {
      out.push_back({n.args[0].name, std::stoi(n.args[1].name)});
    } else {
      fail(n, "expected a predicate symbol");
    }
  };
  if (s.kind == Syntax::Kind::List) {
    if (!s.tail.empty()) fail(s, "open list not allowed here");
    for (const auto& a : s.args) one(a);
  } else {
    one(s);
  }
  return out;
}

Syntax formula_to_syntax(const Formula& f) {
  using C = Connective;
  switch (f.op()) {
    case C::Atom:
    case C::MacroCall: {
      if (f.terms().empty()) return capitalized(f.name()) ? Syntax::variable(f.name()) : Syntax::atom(f.name());
      std::vector<Syntax> args;
      for (const auto& t : f.terms()) args.push_back(term_to_syntax(t));
      return Syntax::compound(f.name(), std::move(args));
    }
    case C::Equal:
      return Syntax::compound("=", {term_to_syntax(f.terms()[0]), term_to_syntax(f.terms()[1])});
    case C::True:
      return Syntax::atom("true");
    case C::False:
      return Syntax::atom("false");
    case C::Not:
      return Syntax::compound("~", {formula_to_syntax(f.body())});
    case C::And:
      return nest(",", f.children());
    case C::Or:
      return nest(";", f.children());
    case C::Implies:
      return Syntax::compound("->", {formula_to_syntax(f.lhs()), formula_to_syntax(f.rhs())});
    case C::Iff:
      return Syntax::compound("<->", {formula_to_syntax(f.lhs()), formula_to_syntax(f.rhs())});
    case C::Forall:
      return Syntax::compound("all", {names_syntax(f.vars(), false), formula_to_syntax(f.body())});
    case C::Exists:
      return Syntax::compound("ex", {names_syntax(f.vars(), false), formula_to_syntax(f.body())});
    case C::Forall2:
      return Syntax::compound("all2", {preds_syntax(f.preds()), formula_to_syntax(f.body())});
    case C::Exists2:
      return Syntax::compound("ex2", {preds_syntax(f.preds()), formula_to_syntax(f.body())});
    case C::Lambda:
      return Syntax::compound("lambda", {names_syntax(f.vars(), true), formula_to_syntax(f.body())});
    case C::Apply: {
      std::vector<Syntax> args;
      for (const auto& t : f.terms()) args.push_back(term_to_syntax(t));
      const Formula& head = f.body();
      if (head.is(C::MacroCall) && head.terms().empty() && capitalized(head.name())) {
        Syntax s = Syntax::compound(head.name(), std::move(args));
        s.functor_is_variable = true;
        return s;
      }
      args.insert(args.begin(), formula_to_syntax(head));
      return Syntax::compound("$apply", std::move(args));
    }
  }
  return Syntax::atom("true");
}

Formula parse_formula(std::string_view src, const ReadOptions& opts) {
  Syntax s = parse_syntax(src);
  Formula f = read_formula(s, opts);
  for (const auto& [name, arities] : predicate_arities(f))
    if (arities.size() > 1) throw ArityError("predicate " + name + " used with more than one arity");
  std::map<std::string, int> fun;
  for (const auto& [name, arity] : function_symbols(f)) {
    auto [it, fresh] = fun.emplace(name, arity);
    if (!fresh && it->second != arity) throw ArityError("function " + name + " used with more than one arity");
  }
  return f;
}

std::string print_term(const Term& t) { return print_syntax(term_to_syntax(t)); }

}  // namespace pie
