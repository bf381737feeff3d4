#include "pie/document.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pie/error.hpp"
#include "pie/interpolation.hpp"

namespace pie {

namespace {

using K = Syntax::Kind;
using Bindings = std::map<std::string, Syntax>;

[[noreturn]] void fail(const Syntax& s, const std::string& msg) { throw SyntaxError(s.pos, msg); }

bool is_number(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::string latex_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\':
        out += "\\textbackslash{}";
        break;
      case '{':
      case '}':
      case '_':
      case '&':
      case '%':
      case '$':
      case '#':
        out += '\\';
        out += c;
        break;
      case '^':
        out += "\\^{}";
        break;
      case '~':
        out += "\\~{}";
        break;
      case '\n':
        out += ' ';
        break;
      default:
        out += c;
    }
  }
  return out;
}

PrintOptions latex_options() {
  PrintOptions o;
  o.style = PrintStyle::Latex;
  return o;
}

std::string latex_inline(const Formula& f) { return print_formula(f, latex_options()); }

std::string latex_block(const Formula& f) {
  return "\\[\\begin{array}{lllll}\n" + latex_display(f, latex_options(), ".") + "\n\\end{array}\n\\]\n";
}

// Keys that may appear nested in elim_options.
void read_option_items(const Syntax& list, OptionList& out) {
  if (list.kind != K::List || !list.tail.empty()) fail(list, "option list expected");
  for (const auto& item : list.args) {
    if (!item.is_compound("=", 2) || item.args[0].kind != K::Atom) fail(item, "option of the form key=value expected");
    const std::string& key = item.args[0].name;
    if (key == "elim_options") {
      read_option_items(item.args[1], out);
      continue;
    }
    out.emplace_back(key, item.args[1]);
  }
}

bool read_bool(const std::string& key, const Syntax& v) {
  if (v.is_atom("true")) return true;
  if (v.is_atom("false")) return false;
  fail(v, "option " + key + " expects true or false");
}

int read_int(const std::string& key, const Syntax& v) {
  if (v.kind == K::Atom && is_number(v.name)) return std::stoi(v.name);
  fail(v, "option " + key + " expects a number");
}

Pipeline read_pipeline(const std::string& key, const Syntax& v) {
  std::vector<Syntax> items;
  if (v.kind == K::List)
    items = v.args;
  else
    items.push_back(v);
  Pipeline p = Pipeline::None;
  for (const auto& i : items) {
    if (i.is_atom("c6"))
      p = Pipeline::C6;
    else if (i.is_atom("d6"))
      p = Pipeline::D6;
    else
      fail(i, "option " + key + ": unknown simplification " + print_syntax(i));
  }
  return p;
}

std::string read_path(const Syntax& v) {
  if (v.is_compound("printstyle", 1)) return read_path(v.args[0]);
  if (v.is_compound("$quoted", 1)) return v.args[0].name;
  if (v.kind == K::Atom) return v.name;
  fail(v, "file name expected");
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
    if (it != b.end() && it->second.kind == K::Atom) {
      Syntax c = Syntax::compound(it->second.name, out.args);
      c.pos = s.pos;
      return c;
    }
    if (it != b.end()) {
      std::vector<Syntax> args{it->second};
      args.insert(args.end(), out.args.begin(), out.args.end());
      return Syntax::compound("$apply", std::move(args));
    }
  }
  return out;
}

std::optional<DirectiveKind> directive_kind(const Syntax& g) {
  if (g.kind != K::Compound || g.functor_is_variable || g.args.empty() || g.args.size() > 2) return std::nullopt;
  if (g.name == "ppl_elim") return DirectiveKind::Elim;
  if (g.name == "ppl_ipol") return DirectiveKind::Ipol;
  if (g.name == "ppl_valid") return DirectiveKind::Valid;
  if (g.name == "ppl_form") return DirectiveKind::Form;
  return std::nullopt;
}

void check_goal(const Syntax& g, const LoadedDocument& doc) {
  if (g.is_compound(",", 2)) {
    check_goal(g.args[0], doc);
    check_goal(g.args[1], doc);
    return;
  }
  if (g.is_atom("true") || directive_kind(g)) return;
  if (g.kind == K::Compound && !g.functor_is_variable &&
      doc.procedures.contains({g.name, static_cast<int>(g.args.size())}))
    return;
  if (g.kind == K::Atom && doc.procedures.contains({g.name, 0})) return;
  fail(g, "unknown directive " + print_syntax(g));
}

std::string latex_syntax(const Syntax& s) {
  switch (s.kind) {
    case K::Variable:
      return "\\pplparam{" + latex_symbol(s.name) + "}";
    case K::Atom:
      return "\\mathsf{" + latex_symbol(s.name) + "}";
    case K::List: {
      std::string out = "{[}";
      for (std::size_t i = 0; i < s.args.size(); ++i) out += (i ? "," : "") + latex_syntax(s.args[i]);
      if (!s.tail.empty()) out += "|" + latex_syntax(s.tail.front());
      return out + "{]}";
    }
    case K::Embedded:
      return latex_inline(*s.embedded);
    case K::Compound:
      break;
  }
  if (s.is_compound("/", 2)) return latex_syntax(s.args[0]) + "/" + latex_syntax(s.args[1]);
  if (s.is_compound("-", 2)) return latex_syntax(s.args[0]) + "\\textrm{-}\\mathsf{" + latex_symbol(s.args[1].name) + "}";
  std::string out = (s.functor_is_variable ? "\\pplparam{" : "\\mathsf{") + latex_symbol(s.name) + "}(";
  for (std::size_t i = 0; i < s.args.size(); ++i) out += (i ? "," : "") + latex_syntax(s.args[i]);
  return out + ")";
}

std::string latex_head(const MacroDefinition& def) {
  std::string out = "\\ppldefmacro{" + latex_symbol(def.name) + "}";
  if (def.params.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < def.params.size(); ++i) out += (i ? "," : "") + latex_syntax(def.params[i]);
  return out + ")";
}

std::string latex_step(const BuiltinCall& step) {
  const auto& a = step.args;
  switch (step.kind) {
    case BuiltinCall::Kind::RenameFreePredicate:
      return latex_syntax(a[3]) + " \\mathrel{\\mathop:}= " + latex_syntax(a[0]) + "[" + latex_syntax(a[1]) +
             " \\mapsto " + latex_syntax(a[4]) + "]";
    case BuiltinCall::Kind::GetArity:
      return latex_syntax(a[2]) + " \\mathrel{\\mathop:}= \\mathrm{arity\\ of }\\; " + latex_syntax(a[0]) +
             "\\; \\mathrm{ in }\\; " + latex_syntax(a[1]);
    case BuiltinCall::Kind::TransferClauses: {
      bool forward = a[1].is_atom("p");
      std::string from = latex_syntax(a[0]), to = latex_syntax(a[2]);
      return latex_syntax(a[3]) + " \\mathrel{\\mathop:}= \\mathrm{transfer\\ clauses}\\; " +
             (forward ? from + " \\rightarrow " + to : to + " \\rightarrow " + from);
    }
    case BuiltinCall::Kind::LastResult:
      return latex_syntax(a[0]) + " \\mathrel{\\mathop:}= \\mathrm{last\\ result}";
  }
  return {};
}

std::string index_key(const Syntax& head) {
  std::string s;
  for (char c : print_syntax(head))
    if (c != ' ') s += c;
  for (char c : s)
    if (c == '@' || c == '!' || c == '|' || c == '"' || c == '{' || c == '}' || c == '\\') return {};
  return s;
}

std::string render_definition(const MacroDefinition& def, const MacroTable& table) {
  std::ostringstream out;
  std::string head = latex_head(def);
  out << "\\pplkbBefore\n";
  if (auto key = index_key(def.source.args[0].args[0]); !key.empty()) out << "\\index{" << key << "@$" << head << "$}";
  out << "$\\begin{array}{lllll}\n" << head << "\n\\end{array}\n$\\pplkbBetween\n";
  Formula body = read_with_macros(table, def.body);
  out << "$\\begin{array}{lllll}\n" << latex_display(body, latex_options(), def.steps.empty() ? "." : ",")
      << "\n\\end{array}\n$\\end{center}\\end{samepage}\\noindent\n";
  if (!def.steps.empty()) {
    out << "\\par\\noindent where\\begin{center}\n$\n\\begin{array}{l}";
    for (std::size_t i = 0; i < def.steps.size(); ++i)
      out << latex_step(def.steps[i]) << (i + 1 < def.steps.size() ? ",\\\\\n" : ".\n");
    out << "\\end{array}$\\end{center}\n";
  }
  return out.str();
}

std::string input_line(const Formula& f) { return "\\noindent Input: $" + latex_inline(f) + ".$\\\\\n"; }

std::string failure_line(const std::string& what, const std::string& reason) {
  return "\\noindent " + what + (reason.empty() ? "" : ": " + latex_escape(reason)) + ".\\par\n";
}

std::string dot_path(const std::string& p) {
  for (std::string ext : {".png", ".pdf", ".svg"})
    if (p.ends_with(ext)) return p.substr(0, p.size() - ext.size()) + ".dot";
  return p;
}

struct Runner {
  const LoadedDocument& doc;
  ProcessingContext& ctx;
  int depth = 0;

  void run(const Syntax& goal, Bindings& b) {
    if (goal.is_compound(",", 2)) {
      run(goal.args[0], b);
      run(goal.args[1], b);
      return;
    }
    if (goal.is_atom("true")) return;
    if (auto kind = directive_kind(goal)) {
      OptionList local;
      if (goal.args.size() == 2) read_option_items(substitute(goal.args[1], b), local);
      Options opts = resolve_options(ctx.system, ctx.defaults, local);
      Syntax arg = substitute(goal.args[0], b);
      DirectiveResult r;
      try {
        Formula f = read_with_macros(doc.macros, arg);
        r = run_directive(*kind, f, opts, ctx);
      } catch (const Error& e) {
        r.status = DirectiveResult::Status::Failed;
        r.message = e.what();
        r.latex = "\\noindent Input: \\texttt{" + latex_escape(print_syntax(arg)) + "}\\\\\n" +
                  failure_line("Directive failed", e.what());
      }
      if (opts.printing) ctx.output += r.latex;
      if (opts.result_slot && r.formula) b.insert_or_assign(*opts.result_slot, Syntax::embed(*r.formula));
      return;
    }
    int arity = goal.kind == K::Compound ? static_cast<int>(goal.args.size()) : 0;
    auto it = doc.procedures.find({goal.name, arity});
    if (it == doc.procedures.end()) fail(goal, "unknown directive " + print_syntax(goal));
    if (++depth > 64) fail(goal, "procedure nesting too deep");
    Bindings local;
    for (int i = 0; i < arity; ++i) {
      const Syntax& p = it->second.params[static_cast<std::size_t>(i)];
      Syntax a = substitute(goal.args[static_cast<std::size_t>(i)], b);
      if (p.kind == K::Variable)
        local.insert_or_assign(p.name, a);
      else if (!(p == a))
        fail(goal, "no matching clause for " + print_syntax(goal));
    }
    run(it->second.body, local);
    --depth;
  }
};

void add_item(LoadedDocument& out, const SourceItem& it) {
  DocumentItem item;
  item.pos = it.pos;
  if (it.kind == SourceItem::Kind::BlockComment) {
    item.kind = DocumentItem::Kind::Latex;
    item.text = it.comment;
    out.document.items.push_back(std::move(item));
    return;
  }
  const Syntax& c = it.clause;
  if (c.is_compound("::", 2)) {
    item.kind = DocumentItem::Kind::MacroDef;
    item.macro = read_definition(c);
    out.macros.define(item.macro);
  } else if (c.is_compound(":-", 1)) {
    const Syntax& g = c.args[0];
    if (g.is_compound("ppl_printtime", 1)) {
      item.kind = DocumentItem::Kind::Directive;
      item.goal = g.args[0];
    } else if (g.is_compound("ppl_set_defaults", 1)) {
      item.kind = DocumentItem::Kind::ConfigDefault;
      read_option_items(g.args[0], item.defaults);
    } else {
      fail(g, "unknown directive " + print_syntax(g));
    }
  } else if (c.is_compound(":-", 2)) {
    const Syntax& h = c.args[0];
    if (h.kind == K::Atom) {
      item.procedure = {h.name, {}, c.args[1]};
    } else if (h.kind == K::Compound && !h.functor_is_variable) {
      item.procedure = {h.name, h.args, c.args[1]};
    } else {
      fail(h, "malformed procedure head");
    }
    item.kind = DocumentItem::Kind::Procedure;
    out.procedures.insert_or_assign({item.procedure.name, static_cast<int>(item.procedure.params.size())},
                                    item.procedure);
  } else {
    fail(c, "expected a definition, a directive or a block comment");
  }
  out.document.items.push_back(std::move(item));
}

LoadedDocument load_into(LoadedDocument out, std::string_view src) {
  out.document.items.clear();
  for (const auto& it : parse_source(src)) add_item(out, it);
  for (const auto& item : out.document.items) {
    if (item.kind == DocumentItem::Kind::Directive) check_goal(item.goal, out);
    if (item.kind == DocumentItem::Kind::Procedure) check_goal(item.procedure.body, out);
  }
  return out;
}

}  // namespace

ProverConfig Options::prover() const {
  ProverConfig c;
  c.timeout = timeout;
  c.max_depth = max_depth;
  c.max_domain = max_domain;
  return c;
}

EliminationOptions Options::elimination() const {
  EliminationOptions e;
  e.pre = pre;
  e.simp_result = simp_result;
  e.branch_bound = branch_bound;
  e.timeout = timeout;
  return e;
}

OptionList read_options(const Syntax& list) {
  OptionList out;
  read_option_items(list, out);
  return out;
}

OptionList system_defaults() {
  OptionList out;
  if (const char* t = std::getenv("PIE_TIMEOUT_MS"); t && is_number(t)) out.emplace_back("timeout", Syntax::atom(t));
  return out;
}

Options resolve_options(const OptionList& system, const OptionList& document, const OptionList& directive) {
  Options o;
  for (const auto* layer : {&system, &document, &directive}) {
    for (const auto& [key, v] : *layer) {
      if (key == "printing")
        o.printing = read_bool(key, v);
      else if (key == "r") {
        if (v.kind != K::Variable) fail(v, "option r expects a placeholder");
        o.result_slot = v.name;
      } else if (key == "simp_result")
        o.simp_result = read_pipeline(key, v);
      else if (key == "pre")
        o.pre = read_pipeline(key, v);
      else if (key == "ip_dotgraph")
        o.dotgraph = read_path(v);
      else if (key == "ip_simp_sides")
        o.ip_simp_sides = read_bool(key, v);
      else if (key == "timeout")
        o.timeout = std::chrono::milliseconds(read_int(key, v));
      else if (key == "max_depth")
        o.max_depth = read_int(key, v);
      else if (key == "max_domain")
        o.max_domain = read_int(key, v);
      else if (key == "branch_bound")
        o.branch_bound = read_int(key, v);
      else
        fail(v, "unknown option " + key);
    }
  }
  return o;
}

LoadedDocument load_document(std::string_view src) { return load_into({}, src); }

LoadedDocument reload_document(const LoadedDocument& base, std::string_view src) { return load_into(base, src); }

DirectiveResult run_directive(DirectiveKind kind, const Formula& argument, const Options& opts, ProcessingContext& ctx) {
  static const MacroTable empty;
  const MacroTable& table = ctx.document ? ctx.document->macros : empty;
  DirectiveResult r;
  switch (kind) {
    case DirectiveKind::Form: {
      r.formula = expand(table, argument, ctx.macro);
      r.latex = latex_block(argument);
      return r;
    }
    case DirectiveKind::Elim: {
      Formula f = expand(table, argument, ctx.macro);
      auto out = eliminate(f, opts.elimination());
      if (!out.ok()) {
        r.status = DirectiveResult::Status::Failed;
        r.message = out.reason;
        r.latex = input_line(argument) + failure_line("Elimination failed", out.reason);
        return r;
      }
      r.formula = out.result;
      ctx.macro.last_result = out.result;
      r.latex = input_line(argument) + "\\noindent Result of elimination:\n" + latex_block(out.result);
      return r;
    }
    case DirectiveKind::Ipol: {
      Formula f = expand(table, argument, ctx.macro);
      try {
        auto h = interpolate(f, opts.prover(), {opts.ip_simp_sides});
        r.formula = h.formula;
        ctx.macro.last_result = h.formula;
        if (opts.dotgraph) {
          std::ofstream dot(dot_path(*opts.dotgraph));
          if (!dot) throw Error("cannot write " + dot_path(*opts.dotgraph));
          dot << emit_tableau_dot(h.proof);
        }
        r.latex = input_line(argument) + "\\noindent Result of interpolation:\n" + latex_block(h.formula);
      } catch (const InterpolationError& e) {
        r.status = e.not_valid() ? DirectiveResult::Status::NotValid : DirectiveResult::Status::Failed;
        r.message = e.what();
        r.latex = input_line(argument) +
                  failure_line(e.not_valid() ? "Interpolation failed: the implication is not valid"
                                             : "Interpolation failed",
                               e.not_valid() ? "" : e.what());
      }
      return r;
    }
    case DirectiveKind::Valid: {
      Formula f = expand(table, argument, ctx.macro);
      auto v = validate(f, opts.prover());
      std::string shown = latex_inline(argument) + ".";
      if (std::holds_alternative<Valid>(v)) {
        r.latex = "\\pplIsValid{" + shown + "}\n";
      } else if (const auto* nv = std::get_if<NotValid>(&v)) {
        r.status = DirectiveResult::Status::NotValid;
        r.message = print_model(nv->model);
        r.latex = "\\pplIsNotValid{" + shown + "}\n";
      } else {
        r.status = DirectiveResult::Status::Failed;
        r.message = std::get<Failed>(v).reason;
        r.latex = "\\pplFailedToValidate{" + shown + "}\n";
      }
      return r;
    }
  }
  return r;
}

std::string process_document(const LoadedDocument& doc, const OptionList& system) {
  ProcessingContext ctx;
  ctx.document = &doc;
  ctx.system = system;
  Runner runner{doc, ctx};
  for (const auto& item : doc.document.items) {
    switch (item.kind) {
      case DocumentItem::Kind::Latex:
        ctx.output += item.text;
        break;
      case DocumentItem::Kind::MacroDef:
        ctx.output += render_definition(item.macro, doc.macros);
        break;
      case DocumentItem::Kind::ConfigDefault:
        ctx.defaults.insert(ctx.defaults.end(), item.defaults.begin(), item.defaults.end());
        break;
      case DocumentItem::Kind::Procedure:
        break;
      case DocumentItem::Kind::Directive: {
        Bindings b;
        try {
          runner.run(item.goal, b);
        } catch (const Error& e) {
          ctx.output += failure_line("Directive failed", e.what());
        }
        break;
      }
    }
  }
  return ctx.output;
}

std::string latex_preamble() {
  return R"(\usepackage{amsmath}
\newcommand{\pplmacro}[1]{\mathit{#1}}
\newcommand{\ppldefmacro}[1]{\mathit{#1}}
\newcommand{\pplparam}[1]{\mathit{#1}}
\newcommand{\pplparamplain}[1]{#1}
\newcommand{\pplkbBefore}{\par\begin{samepage}\begin{center}}
\newcommand{\pplkbBetween}{\\[0.5ex]\hspace*{2em}$\mathrel{\mathop:}=$\hspace*{1em}}
\newcommand{\pplIsValid}[1]{\par\noindent$#1$\\\noindent This formula is valid.\par}
\newcommand{\pplIsNotValid}[1]{\par\noindent$#1$\\\noindent This formula is not valid.\par}
\newcommand{\pplFailedToValidate}[1]{\par\noindent$#1$\\\noindent Failed to validate this formula.\par}
\newcommand{\index}[1]{}
)";
}

std::string standalone_latex(const std::string& body) {
  return "\\documentclass{article}\n" + latex_preamble() + "\\begin{document}\n" + body + "\n\\end{document}\n";
}

}  // namespace pie
