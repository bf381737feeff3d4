#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pie/formula.hpp"
#include "pie/syntax.hpp"

namespace pie {

// One step of a macro body, e.g. mac_get_arity(P, F, A).
struct BuiltinCall {
  enum class Kind { RenameFreePredicate, GetArity, TransferClauses, LastResult };
  Kind kind;
  std::vector<Syntax> args;
  SourcePosition pos;
};

struct MacroDefinition {
  std::string name;
  // Head argument patterns: placeholders, or structures matched literally.
  std::vector<Syntax> params;
  Syntax body;
  std::vector<BuiltinCall> steps;
  // Source of the whole definition, for display.
  Syntax source;

  int arity() const { return static_cast<int>(params.size()); }
};

class MacroTable {
 public:
  // Appends `def`; a definition with an identical head replaces the old one.
  // Throws MacroError for placeholders nothing can bind.
  void define(MacroDefinition def);

  // Definitions for name/arity in declaration order; empty when unknown.
  const std::vector<MacroDefinition>& lookup(const std::string& name, int arity) const;
  const std::set<std::pair<std::string, int>>& signatures() const { return signatures_; }
  bool empty() const { return defs_.empty(); }

 private:
  std::map<std::pair<std::string, int>, std::vector<MacroDefinition>> defs_;
  std::set<std::pair<std::string, int>> signatures_;
};

MacroTable define_macro(MacroTable table, MacroDefinition def);

// `def(Head) :: Body` or `def(Head) :: Body ::- Steps` as read by the parser.
MacroDefinition read_definition(const Syntax& clause);

// Mutable per-job state of expansion.
struct MacroContext {
  std::optional<Formula> last_result;
  int max_depth = 512;
};

// Replaces every macro call by its expansion. Leftover placeholders are
// bound to fresh symbols; λ-applications are β-reduced.
Formula expand(const MacroTable& table, const Formula& f, MacroContext& ctx);

// Parses with the table's macro names recognized as calls.
Formula parse_with_macros(const MacroTable& table, std::string_view src);
Formula read_with_macros(const MacroTable& table, const Syntax& s);

// Returns f with p renamed to a fresh predicate, and that predicate's name.
// Only mode "pn" (both polarities) is supported.
std::pair<Formula, std::string> builtin_rename_free_predicate(const Formula& f, const PredicateSpec& p,
                                                              std::string_view mode, FreshNames& names);

int builtin_get_arity(const std::string& p, const Formula& f);

// Direction "p": ∀x̄ (P'(x̄) → P(x̄)) per pair; "n": ∀x̄ (P(x̄) → P'(x̄)).
// Specs carry the tag of the source form P/A-n; only tag "n" is supported.
struct TransferSpec {
  PredicateSpec predicate;
  std::string tag = "n";
};
Formula builtin_transfer_clauses(const std::vector<TransferSpec>& specs, std::string_view direction,
                                 const std::vector<PredicateSpec>& primed);

}  // namespace pie
