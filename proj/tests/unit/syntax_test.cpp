#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pie/error.hpp"
#include "pie/preprocess.hpp"

using namespace pie;

TEST_CASE("parser reads quantified second-order input") {
  Formula f = F("ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))))");
  REQUIRE(f.is(Connective::Exists2));
  CHECK(f.preds().front().name == "p");
  REQUIRE(f.body().is(Connective::And));
  CHECK(f.body().children().size() == 2);
  CHECK(f.body().children()[0].is(Connective::Forall));
  CHECK(f.body().children()[0].body().is(Connective::Implies));
}

TEST_CASE("operator precedence") {
  Formula f = F("a , b ; c");
  REQUIRE(f.is(Connective::Or));
  CHECK(f.children()[0].is(Connective::And));
  CHECK(F("a -> b -> c").rhs().is(Connective::Implies));
  CHECK(F("a ; b -> c").lhs().is(Connective::Or));
  CHECK(F("a -> b <-> c").is(Connective::Iff));
  CHECK(F("~a , b").is(Connective::And));
}

TEST_CASE("parse errors carry a position") {
  try {
    F("all(x");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.position().line == 1);
    CHECK(e.position().column == 6);
  }
  try {
    F("p(a),\n  q(");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.position().line == 2);
  }
  CHECK_THROWS_AS(F("p(a), p(a, b)"), ArityError);
  CHECK_THROWS_AS(F("'quoted atom'"), SyntaxError);
}

TEST_CASE("text printing") {
  CHECK(P(F("all(x, (q(x) -> r(x)))")) == "all(x, (q(x)->r(x)))");
  CHECK(P(Formula::truth()) == "true");
  CHECK(P(Formula::falsity()) == "false");
  CHECK(P(F("~(a = b)")) == "~a=b");
}

TEST_CASE("text printing round-trips") {
  const char* corpus[] = {
      "ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))))",
      "all2([p, s], (kb -> (p(a) <-> (q(a), r(a)))))",
      "all([x, y], (e(x, y) -> (~((r(x), r(y))), ~((g(x), g(y))))))",
      "(a ; b), ~(c -> d) <-> ~ ~e",
      "lambda([u, v], ((u = 1, v = 2) ; (u = 2, v = 3)))",
      "ex(x, all(y, p(f(x, g(y)), y)))",
      "p -> (q -> r)",
      "(p -> q) -> r",
      "~ex(x, p(x)), true ; false",
  };
  for (const char* s : corpus) {
    Formula f = F(s);
    CHECK_MESSAGE(F(P(f)) == f, s);
  }
  oracle::FormulaGen gen({"p", "q", "r"}, 3u);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.next(5);
    CHECK(F(P(f)) == f);
  }
}

TEST_CASE("compact printing drops argument parentheses") {
  PrintOptions o;
  o.compact = true;
  std::string s = print_formula(F("p(a, b)"), o);
  CHECK(s.find('(') == std::string::npos);
  CHECK(s.find(',') == std::string::npos);
}

TEST_CASE("latex symbols") {
  CHECK(latex_symbol("kb1") == "kb_{1}");
  CHECK(latex_symbol("P_p") == "P^{\\prime}");
  CHECK(latex_symbol("fo_col2") == "fo\\_col_{2}");
  CHECK(latex_symbol("kb1", false) == "kb1");
  PrintOptions o;
  o.style = PrintStyle::Latex;
  CHECK(print_formula(F("all(x, (q(x) -> r(x)))"), o) ==
        "\\forall \\mathit{x} \\, (\\mathsf{q}(\\mathit{x}) \\rightarrow  \\mathsf{r}(\\mathit{x}))");
  std::string rows = latex_display(F("p, q"), o);
  CHECK(rows == "\\mathsf{p} &&&&\\; \\land \\\\\n\\mathsf{q}.");
}

TEST_CASE("latex output has balanced braces") {
  PrintOptions o;
  o.style = PrintStyle::Latex;
  for (const char* s : {"ex2(p, all(x, (p(x) -> q_p(x1, x))))", "lambda([u], u = c1)", "~(a = b), true"}) {
    int depth = 0;
    for (char c : print_formula(F(s), o)) {
      depth += c == '{' ? 1 : c == '}' ? -1 : 0;
      CHECK(depth >= 0);
    }
    CHECK(depth == 0);
  }
}

TEST_CASE("TPTP output") {
  CHECK(emit_tptp("goal", TptpRole::Conjecture, F("(p, q) -> (p ; r)")) ==
        "fof(goal, conjecture, ((p & q) => (p | r))).");
  CHECK(emit_tptp("ax1", TptpRole::Axiom, F("all(x, p(x))")) == "fof(ax1, axiom, ! [X] : p(X)).");
  CHECK(emit_tptp("e", TptpRole::Axiom, F("ex(x, x = a)")).find("X = a") != std::string::npos);
  CHECK_THROWS_AS(emit_tptp("g", TptpRole::Conjecture, F("ex2(p, p)")), FragmentError);
}

TEST_CASE("DIMACS output") {
  ClausalForm cf;
  cf.clauses.push_back({{{true, "p", {}}, {false, "q", {}}}, std::nullopt});
  auto out = emit_dimacs(cf);
  CHECK(out.text == "p cnf 2 1\n1 -2 0\n");
  CHECK(out.atoms.at("p") == 1);
  CHECK(out.atoms.at("q") == 2);
  CHECK(emit_dimacs(ClausalForm{}).text == "p cnf 0 0\n");

  ClausalForm two;
  two.clauses.push_back({{{true, "p", {}}}, std::nullopt});
  two.clauses.push_back({{{false, "p", {}}}, std::nullopt});
  auto q = emit_qdimacs({{QuantifierKind::Exists, {"p"}}}, two);
  CHECK(q.text.find("e 1 0\n") != std::string::npos);
  CHECK(q.text.rfind("p cnf 1 2\n", 0) == 0);

  ClausalForm fo;
  fo.clauses.push_back({{{true, "p", {Term::constant("a")}}}, std::nullopt});
  CHECK_THROWS_AS(emit_dimacs(fo), FragmentError);
}

TEST_CASE("DIMACS headers match their bodies") {
  oracle::FormulaGen gen({"a", "b", "c", "d"}, 5u);
  for (int i = 0; i < 100; ++i) {
    auto out = emit_dimacs(clausify(gen.next(4)));
    std::istringstream in(out.text);
    std::string p, cnf;
    int vars = 0, clauses = 0;
    in >> p >> cnf >> vars >> clauses;
    int lines = 0, max_var = 0, lit = 0;
    while (in >> lit) {
      if (lit == 0)
        ++lines;
      else
        max_var = std::max(max_var, std::abs(lit));
    }
    CHECK(lines == clauses);
    CHECK(max_var <= vars);
    CHECK(static_cast<int>(out.atoms.size()) == vars);
  }
}
