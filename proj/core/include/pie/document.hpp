#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pie/elimination.hpp"
#include "pie/macros.hpp"
#include "pie/prover.hpp"
#include "pie/syntax.hpp"

namespace pie {

// key=value pairs in source form; later entries win.
using OptionList = std::vector<std::pair<std::string, Syntax>>;

// Effective options of one directive.
struct Options {
  bool printing = true;
  // Placeholder that receives the result (r=Name).
  std::optional<std::string> result_slot;
  Pipeline pre = Pipeline::None;
  Pipeline simp_result = Pipeline::None;
  std::optional<std::string> dotgraph;
  bool ip_simp_sides = true;
  std::chrono::milliseconds timeout{5000};
  int max_depth = 12;
  int max_domain = 4;
  int branch_bound = 64;

  ProverConfig prover() const;
  EliminationOptions elimination() const;
};

// Parses an option list such as [printing=false, elim_options=[pre=[c6]]].
// elim_options entries are flattened into the outer list.
OptionList read_options(const Syntax& list);
// System defaults: built-in values plus PIE_TIMEOUT_MS from the environment.
OptionList system_defaults();
// system ⊕ document ⊕ directive, rightmost wins.
Options resolve_options(const OptionList& system, const OptionList& document, const OptionList& directive);

// `name(Params) :- Goals.` helper predicate callable from directives.
struct Procedure {
  std::string name;
  std::vector<Syntax> params;
  Syntax body;
};

struct DocumentItem {
  enum class Kind { MacroDef, Directive, Latex, ConfigDefault, Procedure };
  Kind kind;
  SourcePosition pos;
  MacroDefinition macro;
  // Argument of ppl_printtime.
  Syntax goal;
  std::string text;
  OptionList defaults;
  Procedure procedure;
};

struct PieDocument {
  std::vector<DocumentItem> items;
};

struct LoadedDocument {
  PieDocument document;
  MacroTable macros;
  std::map<std::pair<std::string, int>, Procedure> procedures;
};

// Throws SyntaxError (with position) or MacroError.
LoadedDocument load_document(std::string_view src);
// Loads `src` on top of `base`: definitions with identical heads are
// replaced, the item list is that of `src`.
LoadedDocument reload_document(const LoadedDocument& base, std::string_view src);

enum class DirectiveKind { Elim, Ipol, Valid, Form };

struct DirectiveResult {
  enum class Status { Ok, NotValid, Failed };
  Status status = Status::Ok;
  std::optional<Formula> formula;
  std::string latex;
  std::string message;
};

struct ProcessingContext {
  const LoadedDocument* document = nullptr;
  MacroContext macro;
  OptionList system = system_defaults();
  OptionList defaults;
  std::string output;
};

// Runs one reasoner call. The argument is read with the document's macros
// and expanded before the reasoner sees it.
DirectiveResult run_directive(DirectiveKind kind, const Formula& argument, const Options& opts, ProcessingContext& ctx);

// LaTeX for the whole document, items in source order.
std::string process_document(const LoadedDocument& doc, const OptionList& system = system_defaults());

// Definitions of the \ppl... commands used by the generated LaTeX.
std::string latex_preamble();
std::string standalone_latex(const std::string& body);

}  // namespace pie
