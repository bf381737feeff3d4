#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pie/formula.hpp"
#include "pie/prover.hpp"

namespace pie {

struct InterpolationOptions {
  // Clausal simplification of each side, keeping the shared predicates.
  bool simplify_sides = true;
};

struct Interpolant {
  Formula formula;
  Tableau proof;
};

// H with F ⊨ H, H ⊨ G, built from a closed tableau for F ∧ ¬G.
// Throws InterpolationError.
Interpolant interpolate(const Formula& left, const Formula& right, const ProverConfig& cfg = {},
                        const InterpolationOptions& opts = {});
// Splits an implication F → G (after reducing its second-order quantifiers).
Interpolant interpolate(const Formula& implication, const ProverConfig& cfg = {},
                        const InterpolationOptions& opts = {});

// Ground interpolant of the clause-level task.
Formula extract_from_tableau(const Tableau& t);

using SymbolSet = std::set<std::pair<std::string, int>>;

// Left-only terms become ∃-variables, right-only terms ∀-variables; smaller
// terms are quantified further out.
Formula generalize_constants(const Formula& h, const SymbolSet& left_functions, const SymbolSet& right_functions);

// H₁..Hₙ for jointly unsatisfiable parts, one binary interpolation each.
std::vector<Formula> symmetric_interpolate(const std::vector<Formula>& parts, const ProverConfig& cfg = {});

std::string emit_tableau_dot(const Tableau& t);

}  // namespace pie
