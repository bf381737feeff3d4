#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pie/clause.hpp"
#include "pie/error.hpp"
#include "pie/formula.hpp"

namespace pie {

// Operator-level syntax tree produced by the reader, before formulas are
// recognized. Mirrors the host-term view of the source language: everything
// is an atom, a capitalized variable, a compound or a list.
struct Syntax {
  enum class Kind { Atom, Variable, Compound, List, Embedded };

  Kind kind = Kind::Atom;
  std::string name;
  std::vector<Syntax> args;
  // List tail after `|`; at most one element.
  std::vector<Syntax> tail;
  // Compound whose functor is a capitalized variable, e.g. E(x,y).
  bool functor_is_variable = false;
  // Formula spliced in by the macro processor.
  std::shared_ptr<const Formula> embedded;
  SourcePosition pos;

  static Syntax atom(std::string name);
  static Syntax variable(std::string name);
  static Syntax compound(std::string functor, std::vector<Syntax> args);
  static Syntax list(std::vector<Syntax> items);
  static Syntax embed(Formula f);

  bool is_atom(std::string_view n) const { return kind == Kind::Atom && name == n; }
  bool is_compound(std::string_view n, std::size_t arity) const {
    return kind == Kind::Compound && !functor_is_variable && name == n && args.size() == arity;
  }

  friend bool operator==(const Syntax& a, const Syntax& b);
};

// One top-level item of a source file: a clause terminated by `.`, or a
// top-level block comment.
struct SourceItem {
  enum class Kind { Clause, BlockComment };
  Kind kind;
  Syntax clause;
  std::string comment;
  SourcePosition pos;
};

// Parses one term; a trailing `.` is accepted.
Syntax parse_syntax(std::string_view src);
std::vector<SourceItem> parse_source(std::string_view src);

// `compact` drops argument parentheses and commas (display only).
std::string print_syntax(const Syntax& s, bool compact = false);

struct ReadOptions {
  // Names read as macro calls instead of atoms, keyed by (name, arity).
  const std::set<std::pair<std::string, int>>* macros = nullptr;
  std::set<std::string> bound_variables;
};

Formula read_formula(const Syntax& s, const ReadOptions& opts = {});
Term read_term(const Syntax& s, const std::set<std::string>& bound = {});
// A single predicate name or a list of names, as in ex2/all2.
std::vector<PredicateSpec> read_predicate_list(const Syntax& s);

Syntax formula_to_syntax(const Formula& f);
// Inverse of encode_syntax for generic macro arguments; plain terms map to
// atoms and compounds.
Syntax term_to_syntax(const Term& t);
// As term_to_syntax; with `keep_macro_marks` the `$macro` wrappers survive so
// read_formula turns them back into macro calls.
Syntax decode_term(const Term& t, bool keep_macro_marks);

// Encodes source syntax as a term so it can travel as a macro-call argument.
// Lists become `[]`/`[|]` compounds, variable functors `$apply`, and calls of
// known macros are wrapped in `$macro`.
Term encode_syntax(const Syntax& s, const ReadOptions& opts = {});

// Parses and reads a formula, rejecting predicates used with two arities.
Formula parse_formula(std::string_view src, const ReadOptions& opts = {});

enum class PrintStyle { Text, Latex };

struct PrintOptions {
  PrintStyle style = PrintStyle::Text;
  // Drop argument parentheses and commas.
  bool compact = false;
  // Trailing digits become subscripts, `_p` suffixes become primes (LaTeX).
  bool convert_symbols = true;
};

std::string print_formula(const Formula& f, const PrintOptions& opts = {});
std::string print_term(const Term& t);

// LaTeX rows for a display: a top-level conjunction becomes one row per
// conjunct; `terminator` (e.g. ".") is appended to the last row.
std::string latex_display(const Formula& f, const PrintOptions& opts = {}, std::string_view terminator = ".");
std::string latex_symbol(std::string_view name, bool convert = true);

enum class TptpRole { Axiom, Conjecture };

// One FOF annotated formula.
std::string emit_tptp(std::string_view name, TptpRole role, const Formula& f);

struct DimacsOutput {
  std::string text;
  // Nullary predicate name to DIMACS variable.
  std::map<std::string, int> atoms;
};

enum class QuantifierKind { Exists, Forall };

DimacsOutput emit_dimacs(const ClausalForm& cf);
DimacsOutput emit_qdimacs(const std::vector<std::pair<QuantifierKind, std::vector<std::string>>>& prefix,
                          const ClausalForm& cf);

}  // namespace pie
