#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pie/clause.hpp"
#include "pie/formula.hpp"

namespace pie {

enum class Side { Left, Right };

struct ProverConfig {
  int start_depth = 1;
  int max_depth = 12;
  int depth_increment = 1;
  std::chrono::milliseconds timeout{5000};
  // Largest domain tried by the countermodel finder.
  int max_domain = 4;
};

// Node of a closed clausal tableau. The root carries no literal; its children
// are an instance of the start clause. Every other inner node is extended by
// an instance of the clause named in its children's `clause` field.
struct TableauNode {
  enum class Closure { Open, Ancestor, Extended };

  Literal literal;
  int clause = -1;
  Side side = Side::Left;
  Closure closure = Closure::Open;
  // For Ancestor closure: how many levels up the complementary literal sits.
  int partner = 0;
  Side partner_side = Side::Left;
  std::vector<TableauNode> children;

  bool is_root() const { return literal.predicate.empty(); }
  std::size_t size() const;
};

struct Tableau {
  TableauNode root;
  // The clause set the tableau was built from, with side labels.
  std::vector<Clause> clauses;
  std::vector<Side> sides;
};

class ProofTimeout : public std::runtime_error {
 public:
  ProofTimeout() : std::runtime_error("prover timeout") {}
};

// Refutes left ∪ right. Returns nullopt when the depth bound or timeout is
// exhausted. Equality axioms are added when "=" occurs.
std::optional<Tableau> prove(const ClausalForm& left, const ClausalForm& right, const ProverConfig& cfg = {});

// Independent of the search: sibling groups are clause instances, leaves
// close against complementary ancestors. Returns an explanation on failure.
std::optional<std::string> check_tableau(const Tableau& t);

// Finite interpretation over {0, ..., size-1}.
struct Model {
  int size = 1;
  std::map<std::string, std::map<std::vector<int>, bool>> predicates;
  std::map<std::string, std::map<std::vector<int>, int>> functions;
};

std::string print_model(const Model& m);

// Evaluates a closed first-order formula. Unknown table entries count as
// false / element 0.
bool evaluate(const Model& m, const Formula& f);

// A model of ¬f with at most `max_domain` elements.
std::optional<Model> find_countermodel(const Formula& f, int max_domain = 4,
                                       std::chrono::milliseconds timeout = std::chrono::milliseconds{5000});

struct Valid {
  Tableau proof;
};
struct NotValid {
  Model model;
};
struct Failed {
  std::string reason;
};
using ValidationResult = std::variant<Valid, NotValid, Failed>;

// Second-order universal quantifiers are reduced first.
ValidationResult validate(const Formula& f, const ProverConfig& cfg = {});

// Drops ∀₂ at positive and ∃₂ at negative polarity after renaming the
// predicates apart. Throws FragmentError for other second-order quantifiers.
Formula reduce_so_universal(const Formula& f);

// Test hooks: called with every tableau `prove` returns and every model
// `find_countermodel` returns. Thread-local; pass nullptr to clear.
using TableauObserver = std::function<void(const Tableau&)>;
using ModelObserver = std::function<void(const Model&, const Formula& negated)>;
void set_tableau_observer(TableauObserver obs);
void set_model_observer(ModelObserver obs);

}  // namespace pie
