#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pie/elimination.hpp"
#include "pie/error.hpp"
#include "pie/macros.hpp"

using namespace pie;

namespace {

MacroTable table_of(std::string_view src) {
  MacroTable t;
  for (const auto& item : parse_source(src))
    if (item.kind == SourceItem::Kind::Clause) t.define(read_definition(item.clause));
  return t;
}

Formula expand_src(const MacroTable& t, std::string_view src) {
  MacroContext ctx;
  return expand(t, parse_with_macros(t, src), ctx);
}

const char* kKb =
    "def(kb1) :: (sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), "
    "(wet(grass) -> wet(shoes)).\n"
    "def(explanation(Kb, Na, Ob)) :: all2(Na, (Kb -> Ob)).\n";

const char* kCirc =
    "def(circ(P, F)) :: F, ~ex2(P_p, (F_p, T1, ~T2)) ::-\n"
    "  mac_rename_free_predicate(F, P, pn, F_p, P_p),\n"
    "  mac_get_arity(P, F, A),\n"
    "  mac_transfer_clauses([P/A-n], p, [P_p], T1),\n"
    "  mac_transfer_clauses([P/A-n], n, [P_p], T2).\n";

}  // namespace

TEST_CASE("define and lookup") {
  MacroTable t = table_of(kKb);
  CHECK(t.lookup("kb1", 0).size() == 1);
  CHECK(t.lookup("explanation", 3).size() == 1);
  CHECK(t.lookup("explanation", 2).empty());
  CHECK(t.lookup("nothing", 0).empty());
  CHECK(t.signatures().contains({"kb1", 0}));

  MacroTable again = define_macro(t, read_definition(parse_syntax("def(kb1) :: p.")));
  REQUIRE(again.lookup("kb1", 0).size() == 1);
  CHECK(P(expand_src(again, "kb1")) == "p");
  // The original table is untouched.
  CHECK(P(expand_src(t, "kb1")) != "p");
}

TEST_CASE("a placeholder nothing binds is rejected") {
  MacroTable t;
  CHECK_THROWS_AS(t.define(read_definition(parse_syntax("def(m(X)) :: p(Y) ::- mac_get_arity(Z, X, W)."))),
                  MacroError);
}

TEST_CASE("expansion") {
  MacroTable t = table_of(kKb);
  Formula e = expand_src(t, "explanation(kb1, [wet], wet(shoes))");
  REQUIRE(e.is(Connective::Forall2));
  CHECK(e.preds().front().name == "wet");
  CHECK(e.body().is(Connective::Implies));
  CHECK(e.body().rhs() == F("wet(shoes)"));
  CHECK(e.body().lhs() == F("(sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), "
                            "(wet(grass) -> wet(shoes))"));
}

TEST_CASE("expansion is closed and leaves no macro calls") {
  MacroTable t = table_of(std::string(kKb) + kCirc);
  for (const char* src : {"kb1", "circ(wet, kb1)", "explanation(circ(p, p(a)), [p], q)"}) {
    Formula e = expand_src(t, src);
    std::function<bool(const Formula&)> clean = [&](const Formula& f) {
      if (f.is(Connective::MacroCall) || f.is(Connective::Apply) || f.is(Connective::Lambda)) return false;
      for (const auto& c : f.children())
        if (!clean(c)) return false;
      return true;
    };
    CHECK_MESSAGE(clean(e), src);
    CHECK(free_variables(e).empty());
  }
}

TEST_CASE("λ arguments are β-reduced") {
  MacroTable t = table_of("def(sym(E)) :: all([x, y], (E(x, y) -> E(y, x))).");
  Formula e = expand_src(t, "sym(lambda([u, v], r(v, u)))");
  CHECK(P(e) == "all([x, y], (r(y, x)->r(x, y)))");
}

TEST_CASE("recursive expansion is depth bounded") {
  MacroTable t = table_of("def(loop) :: (p, loop).");
  MacroContext ctx;
  ctx.max_depth = 20;
  CHECK_THROWS_AS(expand(t, parse_with_macros(t, "loop"), ctx), MacroError);
}

TEST_CASE("circumscription macro") {
  MacroTable t = table_of(kCirc);
  Formula e = expand_src(t, "circ(p, p(a))");
  // p(a), ¬∃q (q(a) ∧ ∀x(q(x) → p(x)) ∧ ¬∀x(p(x) → q(x)))
  REQUIRE(e.is(Connective::And));
  CHECK(e.children().front() == F("p(a)"));
  const Formula& neg = e.children().back();
  REQUIRE(neg.is(Connective::Not));
  REQUIRE(neg.body().is(Connective::Exists2));
  std::string q = neg.body().preds().front().name;
  CHECK(q == "q");
  Formula expected = F("p(a), ~ex2(q, (q(a), all(x, (q(x) -> p(x))), ~all(x, (p(x) -> q(x)))))");
  auto lhs = eliminate(e), rhs = eliminate(expected);
  REQUIRE(lhs.ok());
  REQUIRE(rhs.ok());
  CHECK(oracle::equivalent(lhs.result, rhs.result));
  CHECK(oracle::equivalent(lhs.result, F("p(a), all(x, (p(x) -> x = a))")));
}

TEST_CASE("builtin rename") {
  FreshNames names(F("p(a), q1(b)"));
  auto [g, fresh] = builtin_rename_free_predicate(F("p(a), q1(b)"), {"p", 1}, "pn", names);
  CHECK(fresh == "q");
  CHECK(P(g) == "q(a), q1(b)");
  CHECK_THROWS_AS(builtin_rename_free_predicate(F("p(a)"), {"p", 1}, "p", names), MacroError);
}

TEST_CASE("builtin get_arity") {
  Formula kb = F("(sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass))");
  CHECK(builtin_get_arity("wet", kb) == 1);
  CHECK(builtin_get_arity("sprinkler_was_on", kb) == 0);
  CHECK_THROWS_AS(builtin_get_arity("missing", kb), MacroError);
  // Two arities of the same name cannot be parsed; build the formula directly.
  Formula clash = Formula::conjunction({Formula::atom("p"), Formula::atom("q", {Term::constant("a")}),
                                        Formula::atom("q")});
  CHECK_THROWS_AS(builtin_get_arity("q", clash), MacroError);
}

TEST_CASE("builtin transfer_clauses") {
  std::vector<TransferSpec> specs{{{"p", 1}, "n"}};
  std::vector<PredicateSpec> primed{{"q", 1}};
  CHECK(P(builtin_transfer_clauses(specs, "p", primed)) == "all(x, (q(x)->p(x)))");
  CHECK(P(builtin_transfer_clauses(specs, "n", primed)) == "all(x, (p(x)->q(x)))");
  CHECK(builtin_transfer_clauses({}, "p", {}) == Formula::truth());
  CHECK(P(builtin_transfer_clauses({{{"s", 0}, "n"}}, "p", {{"t", 0}})) == "t->s");
  CHECK_THROWS_AS(builtin_transfer_clauses(specs, "x", primed), MacroError);
  CHECK_THROWS_AS(builtin_transfer_clauses({{{"p", 1}, "m"}}, "p", primed), MacroError);
}
