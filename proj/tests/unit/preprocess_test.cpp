#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pie/error.hpp"
#include "pie/preprocess.hpp"

using namespace pie;

namespace {

Literal lit(bool pos, const std::string& p, std::vector<Term> args = {}) { return {pos, p, std::move(args)}; }

bool clause_equivalent(const ClausalForm& cf, const Formula& f) {
  return oracle::equivalent(clauses_formula(cf.clauses), f);
}

}  // namespace

TEST_CASE("clausify propositional input") {
  auto cf = clausify(F("(p ; q), ~r"));
  CHECK(cf.clauses.size() == 2);
  CHECK(cf.skolems.empty());
  CHECK(oracle::same_truth_table(clauses_formula(cf.clauses), F("(p ; q), ~r")));
  CHECK(clausify(Formula::truth()).clauses.empty());
  auto bottom = clausify(Formula::falsity());
  REQUIRE(bottom.clauses.size() == 1);
  CHECK(bottom.clauses.front().empty());
}

TEST_CASE("Skolem functions depend on enclosing universals") {
  auto cf = clausify(F("all(x, ex(y, r(x, y)))"));
  REQUIRE(cf.skolems.size() == 1);
  const auto& sk = cf.skolems.front();
  CHECK(sk.arity == 1);
  CHECK(sk.dependencies == std::vector<std::string>{"x"});
  REQUIRE(cf.clauses.size() == 1);
  const Literal& l = cf.clauses.front().literals.front();
  CHECK(l.args[1].name() == sk.name);

  auto top = clausify(F("ex(y, all(x, r(x, y)))"));
  REQUIRE(top.skolems.size() == 1);
  CHECK(top.skolems.front().arity == 0);
}

TEST_CASE("miniscoping drops irrelevant dependencies") {
  auto cf = clausify(F("all(x, (p(x) ; ex(y, q(y))))"));
  REQUIRE(cf.skolems.size() == 1);
  CHECK(cf.skolems.front().arity == 0);
}

TEST_CASE("clausification preserves truth tables") {
  oracle::FormulaGen gen({"p", "q", "r", "s"}, 77u);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.next(5);
    auto eq = clausify(f, ClausifyMode::Equivalence);
    CHECK(eq.definitions.empty());
    CHECK(oracle::same_truth_table(clauses_formula(eq.clauses), f));
    auto def = clausify(f, ClausifyMode::Definitional);
    auto names = oracle::atoms(f);
    std::vector<std::string> keep(names.begin(), names.end());
    CHECK(oracle::projected_table(def.clauses, keep) == oracle::truth_table(f, keep));
  }
}

TEST_CASE("clausify rejects second-order input") {
  CHECK_THROWS_AS(clausify(F("ex2(p, p)")), FragmentError);
}

TEST_CASE("simplify_clausal removes tautologies and subsumed clauses") {
  ClausalForm cf;
  cf.clauses.push_back({{lit(true, "p"), lit(false, "p")}, std::nullopt});
  cf.clauses.push_back({{lit(true, "q")}, std::nullopt});
  cf.clauses.push_back({{lit(true, "q"), lit(true, "r")}, std::nullopt});
  auto out = simplify_clausal(cf, ProtectedVocabulary::all());
  REQUIRE(out.clauses.size() == 1);
  CHECK(out.clauses.front().literals == std::vector<Literal>{lit(true, "q")});
}

TEST_CASE("simplify_clausal purges unprotected pure predicates") {
  ClausalForm cf;
  cf.clauses.push_back({{lit(true, "p"), lit(true, "q")}, std::nullopt});
  cf.clauses.push_back({{lit(false, "q"), lit(true, "r")}, std::nullopt});
  auto out = simplify_clausal(cf, {{"p", "q"}, false});
  // r is pure and unprotected: its clause goes.
  REQUIRE(out.clauses.size() == 1);
  CHECK(out.clauses.front().literals.size() == 2);
  auto kept = simplify_clausal(cf, ProtectedVocabulary::all());
  CHECK(kept.clauses.size() == 2);
}

TEST_CASE("simplify_clausal is equivalence preserving with everything protected") {
  oracle::FormulaGen gen({"p", "q", "r"}, 21u);
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.next(5);
    auto cf = clausify(f);
    auto s = simplify_clausal(cf, ProtectedVocabulary::all());
    CHECK(oracle::same_truth_table(clauses_formula(s.clauses), f));
  }
}

TEST_CASE("unskolemize restores quantifiers") {
  for (const char* src : {"all(x, ex(y, r(x, y)))", "ex(y, all(x, r(x, y)))",
                          "all(x, (p(x) -> ex(y, (q(y), r(x, y)))))", "p(a), ~q(b)"}) {
    Formula f = F(src);
    Formula u = unskolemize(clausify(f));
    CHECK_MESSAGE(oracle::equivalent(u, f), src);
    CHECK(function_symbols(u) == function_symbols(f));
  }
}

TEST_CASE("unskolemize rejects Skolem terms it cannot undo") {
  // sk applied to two different arguments in one clause.
  ClausalForm cf;
  Term a = Term::constant("a"), b = Term::constant("b");
  cf.skolems.push_back({"sk1", 1, {"x"}, "y"});
  cf.clauses.push_back(
      {{lit(true, "r", {Term::compound("sk1", {a})}), lit(true, "r", {Term::compound("sk1", {b})})}, std::nullopt});
  CHECK_THROWS_AS(unskolemize(cf), UnskolemizeError);
}

TEST_CASE("pipelines are equivalence preserving") {
  for (const char* src : {"all(x, (p(x) -> q(x))), all(x, (q(x) -> r(x)))",
                          "(p ; q), ~p", "ex(x, all(y, r(x, y)))", "all(x, (p(x) ; ~p(x)))",
                          "all([x, y], (e(x, y) -> ~((r(x), r(y)))))"}) {
    Formula f = F(src);
    CHECK_MESSAGE(oracle::equivalent(pipeline_c6(f), f), src);
    CHECK_MESSAGE(oracle::equivalent(pipeline_d6(f), f), src);
  }
  oracle::FormulaGen gen({"p", "q", "r"}, 9u);
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.next(4);
    CHECK(oracle::same_truth_table(pipeline_c6(f), f));
    CHECK(oracle::same_truth_table(pipeline_d6(f), f));
  }
}

TEST_CASE("simplify_formula") {
  CHECK(simplify_formula(F("p, true")) == F("p"));
  CHECK(simplify_formula(F("p ; ~p")) == Formula::truth());
  CHECK(simplify_formula(F("ex(x, (x = a, p(x)))")) == F("p(a)"));
  CHECK(simplify_formula(F("all(x, p)")) == F("p"));
  CHECK(simplify_formula(F("a = a")) == Formula::truth());
}

TEST_CASE("reform turns clauses into implications") {
  CHECK(P(reform(F("~p ; ~q ; r"))) == "p, q->r");
  CHECK(P(reform(F("p ; q"))) == "p; q");
}

TEST_CASE("matching and subsumption") {
  TermSubst s;
  CHECK(match_term(Term::compound("f", {Term::variable("X")}), Term::compound("f", {Term::constant("a")}), s));
  CHECK(s.at("X") == Term::constant("a"));
  CHECK_FALSE(match_term(Term::compound("f", {Term::variable("X"), Term::variable("X")}),
                         Term::compound("f", {Term::constant("a"), Term::constant("b")}), s = {}));
  Clause general{{lit(true, "p", {Term::variable("X")})}, std::nullopt};
  Clause specific{{lit(true, "p", {Term::constant("a")}), lit(true, "q")}, std::nullopt};
  CHECK(subsumes(general, specific));
  CHECK_FALSE(subsumes(specific, general));
}
