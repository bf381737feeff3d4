#include <algorithm>
#include <cctype>
#include <sstream>

#include "pie/syntax.hpp"

namespace pie {

namespace {

bool capitalized(std::string_view n) {
  return !n.empty() && (std::isupper(static_cast<unsigned char>(n[0])) || n[0] == '_');
}

bool all_digits(std::string_view n) {
  return !n.empty() && std::all_of(n.begin(), n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '$' || c == '&' || c == '%' || c == '#') out += '\\';
    out += c;
  }
  return out;
}

// Connective-like functors of encoded macro arguments.
bool formula_functor(std::string_view n) {
  static constexpr std::string_view ops[] = {",", ";", "->", "<->", "~", "all", "ex", "all2", "ex2", "lambda", "\\=", "$macro", "$apply"};
  return std::find(std::begin(ops), std::end(ops), n) != std::end(ops);
}

class LatexPrinter {
 public:
  explicit LatexPrinter(const PrintOptions& o) : opts_(o) {}

  std::string sym(std::string_view name) const { return latex_symbol(name, opts_.convert_symbols); }

  void term(const Term& t, std::ostringstream& out) const {
    if (t.is_variable()) {
      if (capitalized(t.name()))
        out << "\\pplparam{" << sym(t.name()) << "}";
      else
        out << "\\mathit{" << sym(t.name()) << "}";
      return;
    }
    out << "\\mathsf{" << sym(t.name()) << "}";
    args(t.args(), out);
  }

  void args(const std::vector<Term>& ts, std::ostringstream& out) const {
    if (ts.empty()) return;
    if (!opts_.compact) out << '(';
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i && !opts_.compact) out << ',';
      term(ts[i], out);
    }
    if (!opts_.compact) out << ')';
  }

  // Encoded macro-call argument: a formula, a list, or a plain term.
  void macro_arg(const Term& t, std::ostringstream& out) {
    if (t.is_compound() && (t.name() == "[]" || t.name() == "[|]")) {
      out << "{[}";
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) out << (t.name() == "[|]" && i + 1 == t.arity() ? "|" : ",");
        macro_arg(t.args()[i], out);
      }
      out << "{]}";
      return;
    }
    if (t.is_compound() && formula_functor(t.name())) {
      try {
        formula(read_formula(decode_term(t, true)), 0, out);
        return;
      } catch (const Error&) {
      }
    }
    if (t.is_compound() && t.name() == "/" && t.arity() == 2) {
      macro_arg(t.args()[0], out);
      out << '/';
      macro_arg(t.args()[1], out);
      return;
    }
    if (t.is_compound() && t.name() == "-" && t.arity() == 2) {
      macro_arg(t.args()[0], out);
      out << "\\textrm{-}";
      macro_arg(t.args()[1], out);
      return;
    }
    term(t, out);
  }

  static int priority(const Formula& f) {
    switch (f.op()) {
      case Connective::And:
      case Connective::Or:
        return 2;
      case Connective::Implies:
      case Connective::Iff:
        return 3;
      case Connective::Lambda:
        return 4;
      default:
        return 0;
    }
  }

  void child(const Formula& c, int parent, std::ostringstream& out) {
    if (priority(c) >= parent && priority(c) > 0) {
      out << '(';
      formula(c, 0, out);
      out << ')';
    } else {
      formula(c, 0, out);
    }
  }

  void pred_name(const std::string& name, std::ostringstream& out) const {
    if (capitalized(name))
      out << "\\pplparam{" << sym(name) << "}";
    else if (bound_preds_.contains(name))
      out << "\\mathit{" << sym(name) << "}";
    else
      out << "\\mathsf{" << sym(name) << "}";
  }

  void formula(const Formula& f, int, std::ostringstream& out) {
    using C = Connective;
    switch (f.op()) {
      case C::Atom:
        pred_name(f.name(), out);
        args(f.terms(), out);
        return;
      case C::Equal:
        term(f.terms()[0], out);
        out << '=';
        term(f.terms()[1], out);
        return;
      case C::True:
        out << "\\top";
        return;
      case C::False:
        out << "\\bot";
        return;
      case C::Not:
        if (f.body().is(C::Equal)) {
          term(f.body().terms()[0], out);
          out << "\\neq ";
          term(f.body().terms()[1], out);
          return;
        }
        out << "\\lnot ";
        if (priority(f.body()) > 0) {
          out << '(';
          formula(f.body(), 0, out);
          out << ')';
        } else {
          formula(f.body(), 0, out);
        }
        return;
      case C::And:
      case C::Or: {
        const char* sep = f.is(C::And) ? " \\land  " : " \\lor  ";
        for (std::size_t i = 0; i < f.children().size(); ++i) {
          if (i) out << sep;
          child(f.children()[i], 2, out);
        }
        return;
      }
      case C::Implies:
      case C::Iff:
        child(f.lhs(), 3, out);
        out << (f.is(C::Implies) ? " \\rightarrow  " : " \\leftrightarrow  ");
        child(f.rhs(), 3, out);
        return;
      case C::Forall:
      case C::Exists:
      case C::Forall2:
      case C::Exists2:
        quantifier(f, out);
        return;
      case C::Lambda:
        out << "\\lambda (";
        for (std::size_t i = 0; i < f.vars().size(); ++i) {
          if (i) out << ',';
          out << "\\mathit{" << sym(f.vars()[i]) << "}";
        }
        out << ").";
        formula(f.body(), 0, out);
        return;
      case C::MacroCall:
        if (capitalized(f.name()) && f.terms().empty()) {
          out << "\\pplparam{" << sym(f.name()) << "}";
          return;
        }
        out << "\\pplmacro{" << sym(f.name()) << "}";
        if (!f.terms().empty()) {
          out << '(';
          for (std::size_t i = 0; i < f.terms().size(); ++i) {
            if (i) out << ',';
            macro_arg(f.terms()[i], out);
          }
          out << ')';
        }
        return;
      case C::Apply:
        if (priority(f.body()) > 0) {
          out << '(';
          formula(f.body(), 0, out);
          out << ')';
        } else {
          formula(f.body(), 0, out);
        }
        args(f.terms(), out);
        return;
    }
  }

  void quantifier(const Formula& f, std::ostringstream& out) {
    using C = Connective;
    const Formula* cur = &f;
    std::vector<std::string> added;
    // Consecutive quantifiers share one block: \forall x \forall y \, (...).
    while (cur->is_quantifier()) {
      const char* q = (cur->is(C::Forall) || cur->is(C::Forall2)) ? "\\forall " : "\\exists ";
      if (cur->is_second_order_quantifier()) {
        for (const auto& p : cur->preds()) {
          out << q;
          if (capitalized(p.name)) {
            out << "\\pplparam{" << sym(p.name) << "} ";
          } else {
            out << "\\mathit{" << sym(p.name) << "} ";
            if (!bound_preds_.contains(p.name)) {
              bound_preds_.insert(p.name);
              added.push_back(p.name);
            }
          }
        }
      } else {
        for (const auto& v : cur->vars()) out << q << "\\mathit{" << sym(v) << "} ";
      }
      if (!cur->body().is_quantifier() || cur->body().is_second_order_quantifier() != cur->is_second_order_quantifier())
        break;
      cur = &cur->body();
    }
    out << "\\, ";
    const Formula& body = cur->body();
    bool tight = body.is_literal() || body.is(C::Atom) || body.is(C::MacroCall) || body.is_quantifier() ||
                 (body.is(C::Not) && priority(body.body()) == 0) || body.is(C::True) || body.is(C::False);
    if (tight) {
      formula(body, 0, out);
    } else {
      out << '(';
      formula(body, 0, out);
      out << ')';
    }
    for (const auto& n : added) bound_preds_.erase(n);
  }

 private:
  const PrintOptions& opts_;
  std::set<std::string> bound_preds_;
};

}  // namespace

std::string latex_symbol(std::string_view name, bool convert) {
  if (!convert || all_digits(name)) return escape(name);
  std::string base(name);
  int primes = 0;
  while (base.size() > 2 && base.ends_with("_p")) {
    base.resize(base.size() - 2);
    ++primes;
  }
  std::string digits;
  while (base.size() > 1 && std::isdigit(static_cast<unsigned char>(base.back()))) {
    digits.insert(digits.begin(), base.back());
    base.pop_back();
  }
  if (!digits.empty() && base.ends_with('_')) base.pop_back();
  std::string out = escape(base);
  if (!digits.empty()) out += "_{" + digits + "}";
  if (primes) {
    out += "^{";
    for (int i = 0; i < primes; ++i) out += "\\prime";
    out += "}";
  }
  return out;
}

std::string print_formula(const Formula& f, const PrintOptions& opts) {
  if (opts.style == PrintStyle::Text) return print_syntax(formula_to_syntax(f), opts.compact);
  LatexPrinter p(opts);
  std::ostringstream out;
  p.formula(f, 0, out);
  return out.str();
}

std::string latex_display(const Formula& f, const PrintOptions& opts, std::string_view terminator) {
  PrintOptions o = opts;
  o.style = PrintStyle::Latex;
  LatexPrinter p(o);
  std::ostringstream out;
  if (f.is(Connective::And)) {
    const auto& cs = f.children();
    for (std::size_t i = 0; i < cs.size(); ++i) {
      p.child(cs[i], 2, out);
      if (i + 1 < cs.size()) out << " &&&&\\; \\land \\\\\n";
    }
  } else {
    p.formula(f, 0, out);
  }
  out << terminator;
  return out.str();
}

}  // namespace pie
