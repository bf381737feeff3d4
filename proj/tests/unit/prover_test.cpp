#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pie/error.hpp"
#include "pie/preprocess.hpp"
#include "pie/prover.hpp"

using namespace pie;

namespace {

bool is_valid(const Formula& f) { return std::holds_alternative<Valid>(validate(f)); }

}  // namespace

TEST_CASE("prove refutes an unsatisfiable clause set") {
  auto left = clausify(F("p(a), all(x, (p(x) -> q(x)))"));
  auto right = clausify(F("~q(a)"));
  auto t = prove(left, right);
  REQUIRE(t.has_value());
  CHECK_FALSE(check_tableau(*t).has_value());
  CHECK_FALSE(oracle::check_tableau(*t).has_value());
  CHECK(t->clauses.size() == t->sides.size());
}

TEST_CASE("prove gives up on satisfiable input") {
  ProverConfig cfg;
  cfg.max_depth = 4;
  CHECK_FALSE(prove(clausify(F("p(a)")), clausify(F("q(a)")), cfg).has_value());
}

TEST_CASE("tableau checker rejects a broken proof") {
  auto t = prove(clausify(F("p")), clausify(F("~p")));
  REQUIRE(t.has_value());
  Tableau broken = *t;
  broken.clauses[0].literals[0].positive = !broken.clauses[0].literals[0].positive;
  CHECK(check_tableau(broken).has_value());
  CHECK(oracle::check_tableau(broken).has_value());
}

TEST_CASE("countermodels") {
  Formula f = F("all(x, (p(x) -> q(x))) -> all(x, (q(x) -> p(x)))");
  auto m = find_countermodel(f);
  REQUIRE(m.has_value());
  CHECK_FALSE(evaluate(*m, f));
  CHECK_FALSE(oracle::model_eval(*m, f));
  CHECK_FALSE(print_model(*m).empty());
  CHECK_FALSE(find_countermodel(F("p ; ~p")).has_value());
  // ∃x∀y r(x,y) fails with two elements only if r is not total on a row.
  auto big = find_countermodel(F("all(x, ex(y, r(x, y))) -> ex(y, all(x, r(x, y)))"));
  REQUIRE(big.has_value());
  CHECK(big->size >= 2);
}

TEST_CASE("validate") {
  CHECK(is_valid(F("p ; ~p")));
  CHECK(is_valid(F("all(x, p(x)) -> p(a)")));
  auto nv = validate(F("p"));
  REQUIRE(std::holds_alternative<NotValid>(nv));
  CHECK_FALSE(oracle::model_eval(std::get<NotValid>(nv).model, F("p")));
  CHECK(is_valid(F("all2(p, (p(a) -> p(a)))")));
  CHECK(is_valid(F("(kb -> ex2(p, kb))")) == false);
}

TEST_CASE("validate reports failure within its budget") {
  ProverConfig cfg;
  cfg.max_depth = 1;
  cfg.max_domain = 1;
  cfg.timeout = std::chrono::milliseconds{200};
  // Needs several instances of the transitivity clause; the only
  // countermodels would need larger domains.
  Formula f = F(
      "all([x,y,z], ((r(x,y), r(y,z)) -> r(x,z))), r(a,b), r(b,c), r(c,d), r(d,e1) -> r(a,e1)");
  auto res = validate(f, cfg);
  CHECK(std::holds_alternative<Failed>(res));
  CHECK(is_valid(f));
}

TEST_CASE("reduce_so_universal") {
  Formula f = reduce_so_universal(F("all2(p, (p(a) -> p(a)))"));
  CHECK(is_first_order(f));
  Formula g = reduce_so_universal(F("ex2(p, p(a)) -> q"));
  CHECK(is_first_order(g));
  // Renamed apart from the free q.
  CHECK(occurs_free(g, "q"));
  CHECK_THROWS_AS(reduce_so_universal(F("ex2(p, p(a))")), FragmentError);
  CHECK_THROWS_AS(reduce_so_universal(F("~all2(p, p(a))")), FragmentError);
}

TEST_CASE("valid problem suite") {
  const char* suite[] = {
      "p -> p",
      "(p -> q) -> (~q -> ~p)",
      "((p -> q) -> p) -> p",
      "(p , q) <-> (q , p)",
      "~(p ; q) <-> (~p , ~q)",
      "(p -> (q -> r)) <-> ((p , q) -> r)",
      "all(x, p(x)) -> ex(x, p(x))",
      "ex(x, all(y, r(x, y))) -> all(y, ex(x, r(x, y)))",
      "all(x, (p(x) , q(x))) <-> (all(x, p(x)) , all(x, q(x)))",
      "ex(x, (p(x) ; q(x))) <-> (ex(x, p(x)) ; ex(x, q(x)))",
      "ex(x, (p(x) -> all(y, p(y))))",
      "all(x, (p(x) -> q(x))), p(a) -> q(a)",
      "~ex(x, all(y, (r(y, x) <-> ~r(y, y))))",
      "a = a",
      "a = b -> b = a",
      "(a = b , b = c) -> a = c",
      "(a = b , p(a)) -> p(b)",
      "a = b -> f(a) = f(b)",
      "all(x, x = a) -> (p(b) -> p(c))",
      "all(x, (p(x) -> p(f(x)))), p(a) -> p(f(f(a)))",
      "kb1 -> (kb1 ; q(a))",
      "all2(p, (all(x, (p(x) -> q(x))), p(a) -> q(a)))",
  };
  int tableaux = 0;
  set_tableau_observer([&](const Tableau& t) {
    ++tableaux;
    CHECK_FALSE(oracle::check_tableau(t).has_value());
  });
  for (const char* s : suite) CHECK_MESSAGE(is_valid(F(s)), s);
  set_tableau_observer(nullptr);
  CHECK(tableaux >= static_cast<int>(std::size(suite)));
}

TEST_CASE("non-valid suite yields checked countermodels") {
  const char* suite[] = {"p -> q", "ex(x, p(x)) -> all(x, p(x))", "all(y, ex(x, r(x, y))) -> ex(x, all(y, r(x, y)))",
                         "a = b", "p(a) -> p(b)"};
  int models = 0;
  set_model_observer([&](const Model& m, const Formula& negated) {
    ++models;
    CHECK(oracle::model_eval(m, negated));
  });
  for (const char* s : suite) {
    auto r = validate(F(s));
    REQUIRE_MESSAGE(std::holds_alternative<NotValid>(r), s);
    CHECK_FALSE(oracle::model_eval(std::get<NotValid>(r).model, F(s)));
  }
  set_model_observer(nullptr);
  CHECK(models == static_cast<int>(std::size(suite)));
}
