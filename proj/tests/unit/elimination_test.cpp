#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pie/elimination.hpp"
#include "pie/error.hpp"

using namespace pie;

TEST_CASE("elimination of an intermediate predicate") {
  auto out = eliminate(F("ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))))"));
  REQUIRE(out.ok());
  CHECK(P(out.result) == "all(x, (q(x)->r(x)))");
}

TEST_CASE("universal second-order quantifier") {
  auto out = eliminate(F("all2(p, (p ; q))"));
  REQUIRE(out.ok());
  CHECK(oracle::same_truth_table(out.result, F("q")));
}

TEST_CASE("ackermann_rewrite") {
  Formula r = ackermann_rewrite({"p", 1}, F("all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))"));
  CHECK(oracle::equivalent(r, F("all(x, (q(x) -> r(x)))")));
  Formula dual = ackermann_rewrite({"p", 1}, F("all(x, (p(x) -> q(x))), p(a)"));
  CHECK(oracle::equivalent(dual, F("q(a)")));
  CHECK_THROWS_AS(ackermann_rewrite({"p", 1}, F("all(x, (p(x) -> p(f(x)))), p(a), ~p(b)")), EliminationError);
}

TEST_CASE("eliminate_propositional") {
  CHECK(eliminate_propositional("p", F("p")) == Formula::truth());
  CHECK(eliminate_propositional("p", F("p, ~p")) == Formula::falsity());
  CHECK(oracle::same_truth_table(eliminate_propositional("p", F("(p -> q), (~p -> r)")), F("q ; r")));
}

TEST_CASE("random propositional eliminations agree with the semantics") {
  oracle::FormulaGen gen({"p", "q", "r"}, 4242u);
  for (int i = 0; i < 300; ++i) {
    Formula body = gen.next(4);
    Formula q = i % 2 ? Formula::forall2({{"p", 0}}, body) : Formula::exists2({{"p", 0}}, body);
    auto out = eliminate(q);
    REQUIRE(out.ok());
    CHECK(oracle::same_truth_table(out.result, q));
    CHECK_FALSE(oracle::atoms(out.result).contains("p"));
  }
}

TEST_CASE("staged colorability") {
  auto [e, f] = eliminate_staged(F("lambda([u, v], ((u = 1, v = 2) ; (u = 2, v = 3)))"));
  CHECK(is_first_order(f));
  CHECK(oracle::equivalent(f, F("~(1 = 2), ~(2 = 3)")));

  auto [e0, empty] = eliminate_staged(F("lambda([u, v], false)"));
  CHECK(empty == Formula::truth());

  auto [e1, loop] = eliminate_staged(F("lambda([u, v], (u = 1, v = 1))"));
  CHECK(oracle::equivalent(loop, Formula::falsity()));
}

TEST_CASE("nonreducible input") {
  // Transitive closure style: no first-order equivalent.
  auto out = eliminate(F("ex2(p, (p(a), ~p(b), all([x, y], ((p(x), r(x, y)) -> p(y)))))"));
  CHECK(out.status == EliminationOutcome::Status::Nonreducible);
  CHECK_FALSE(out.reason.empty());
}

TEST_CASE("first-order input passes through") {
  auto out = eliminate(F("p(a) -> q(a)"));
  REQUIRE(out.ok());
  CHECK(oracle::equivalent(out.result, F("p(a) -> q(a)")));
}
