#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pie/formula.hpp"

namespace pie {

enum class Pipeline { None, C6, D6 };

struct EliminationOptions {
  Pipeline pre = Pipeline::None;
  Pipeline simp_result = Pipeline::None;
  // Alternative courses (splits, polarity choices) explored per predicate.
  int branch_bound = 64;
  std::chrono::milliseconds timeout{10000};
};

struct EliminationOutcome {
  enum class Status { Success, Nonreducible, Resources };
  Status status = Status::Success;
  Formula result;
  std::string reason;

  bool ok() const { return status == Status::Success; }
};

// Eliminates every second-order quantifier of `f`, innermost first.
EliminationOutcome eliminate(const Formula& f, const EliminationOptions& opts = {});

// ∃p f for f of the form ∀x̄(A → p(x̄)) ∧ B with p negative in B, or the
// dual with p(x̄) → A and p positive in B. Throws EliminationError otherwise.
Formula ackermann_rewrite(const PredicateSpec& p, const Formula& f);

// ∃p f by Shannon expansion; p nullary.
Formula eliminate_propositional(const std::string& p, const Formula& f);

// Two-coloring of the graph `e` (a predicate name or a binary λ): eliminates
// g with pre=c6, then r with pre=d6. Returns (e, final formula).
std::pair<Formula, Formula> eliminate_staged(const Formula& e, const EliminationOptions& opts = {});

}  // namespace pie
