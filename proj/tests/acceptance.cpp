// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "latex_reader.hpp"
#include "oracles.hpp"
#include "pie/document.hpp"
#include "pie/elimination.hpp"
#include "pie/interpolation.hpp"
#include "pie/macros.hpp"
#include "pie/preprocess.hpp"
#include "pie/prover.hpp"
#include "pie/syntax.hpp"

using namespace pie;
using Clock = std::chrono::steady_clock;
using std::chrono::milliseconds;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    } else if (!cond) {
      detail += "; " + what;
    }
  }
};

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(PIE_FIXTURE_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class F>
auto timed(double& secs, F&& f) {
  auto t0 = Clock::now();
  auto r = f();
  secs = seconds_since(t0);
  return r;
}

Formula f(const std::string& s) { return parse_formula(s); }

bool mentions_predicate(const Formula& g, const std::string& p) {
  for (const auto& [sym, pol] : oracle::vocabulary(g).predicates)
    if (sym.first == p) return true;
  return all_names(g).contains(p);
}

std::string limit(const char* what, double secs, double bound) {
  std::ostringstream o;
  o << what << " took " << std::fixed << std::setprecision(2) << secs << " s (limit " << bound << " s)";
  return o.str();
}

Formula expanded(const MacroTable& t, const std::string& src) {
  MacroContext ctx;
  return expand(t, parse_with_macros(t, src), ctx);
}

// Certificates seen while the criteria run.
struct Certificates {
  int tableaux = 0;
  int models = 0;
  std::string first_error;
} certs;

Outcome criterion1() {
  Outcome o;
  double t = 0;
  auto out = timed(t, [] { return eliminate(f("ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))))")); });
  o.require(out.ok(), "elimination failed: " + out.reason);
  if (!out.ok()) return o;
  o.require(t < 1.0, limit("elimination", t, 1));
  o.require(!mentions_predicate(out.result, "p"), "p occurs in " + print_formula(out.result));
  o.require(oracle::equivalent(out.result, f("all(x, (q(x) -> r(x)))")), "not equivalent: " + print_formula(out.result));
  o.detail = o.ok ? print_formula(out.result) : o.detail;
  return o;
}

Outcome criterion2(const MacroTable& t) {
  Outcome o;
  double secs = 0;
  auto out = timed(secs, [&] { return eliminate(expanded(t, "explanation(kb1, [wet], wet(shoes))")); });
  o.require(out.ok(), "elimination failed: " + out.reason);
  if (!out.ok()) return o;
  o.require(secs < 1.0, limit("elimination", secs, 1));
  o.require(!mentions_predicate(out.result, "wet"), "wet occurs in " + print_formula(out.result));
  o.require(oracle::equivalent(out.result, f("rained_last_night ; sprinkler_was_on")),
            "not equivalent: " + print_formula(out.result));
  if (o.ok) o.detail = print_formula(out.result);
  return o;
}

Outcome criterion3(const MacroTable& t) {
  Outcome o;
  double secs = 0;
  Formula g = expanded(t, "(kb1, (rained_last_night ; sprinkler_was_on)) -> wet(shoes)");
  auto v = timed(secs, [&] { return validate(g); });
  o.require(std::holds_alternative<Valid>(v), "not reported valid");
  o.require(secs < 1.0, limit("validation", secs, 1));
  if (o.ok) o.detail = "valid";
  return o;
}

Outcome criterion4(const MacroTable& t) {
  Outcome o;
  double s1 = 0, s2 = 0;
  auto a = timed(s1, [&] { return eliminate(expanded(t, "circ(p, p(a))")); });
  o.require(a.ok(), "circ(p,p(a)) failed: " + a.reason);
  if (a.ok()) {
    o.require(s1 < 5.0, limit("circ(p,p(a))", s1, 5));
    o.require(oracle::equivalent(a.result, f("p(a), all(x, (p(x) -> x = a))")),
              "circ(p,p(a)) not equivalent: " + print_formula(a.result));
  }
  EliminationOptions opts;
  opts.simp_result = Pipeline::C6;
  auto b = timed(s2, [&] { return eliminate(expanded(t, "circ(wet, kb1)"), opts); });
  o.require(b.ok(), "circ(wet,kb1) failed: " + b.reason);
  if (b.ok()) {
    o.require(s2 < 5.0, limit("circ(wet,kb1)", s2, 5));
    Formula paper = f(
        "(rained_last_night -> wet(grass)), (sprinkler_was_on -> wet(grass)), (wet(grass) -> wet(shoes)),"
        " all(x, (wet(x) -> (rained_last_night ; sprinkler_was_on))),"
        " all(x, ((wet(x), wet(grass)) -> (x = grass ; x = shoes)))");
    o.require(oracle::equivalent(b.result, paper), "circ(wet,kb1) not equivalent: " + print_formula(b.result));
  }
  if (o.ok) o.detail = "both circumscriptions equivalent to the displayed results";
  return o;
}

Outcome criterion5(const MacroTable& t) {
  Outcome o;
  double s = 0;
  auto h1 = timed(s, [] { return interpolate(f("(p, q) -> (p ; r)")); });
  o.require(print_formula(h1.formula) == "p", "first interpolant is " + print_formula(h1.formula));
  o.require(s < 5.0, limit("first interpolation", s, 5));

  auto h2 = timed(s, [] { return interpolate(f("(all(x, p(a, x)), q) -> (ex(x, p(x, b)) ; r)")); });
  o.require(s < 5.0, limit("second interpolation", s, 5));
  o.require(oracle::equivalent(h2.formula, f("ex(x, all(y, p(x, y)))")),
            "second interpolant not equivalent: " + print_formula(h2.formula));
  auto voc = oracle::vocabulary(h2.formula);
  o.require(voc.functions.empty() && voc.predicates.size() == 1 && voc.predicates.begin()->first.first == "p",
            "second interpolant vocabulary is not {p}: " + print_formula(h2.formula));

  Formula d = expanded(t, "definiens(p(a), kb2, [p, s])");
  auto v = timed(s, [&] { return validate(reduce_so_universal(d)); });
  o.require(std::holds_alternative<Valid>(v), "definiens not reported valid");
  o.require(s < 5.0, limit("definiens validation", s, 5));
  try {
    auto h3 = timed(s, [&] { return interpolate(d); });
    o.require(s < 5.0, limit("definiens interpolation", s, 5));
    o.require(oracle::equivalent(h3.formula, f("q(a), r(a)")),
              "definiens interpolant not equivalent: " + print_formula(h3.formula));
  } catch (const Error& e) {
    o.require(false, std::string("definiens interpolation failed: ") + e.what());
  }
  if (o.ok) o.detail = "p; " + print_formula(h2.formula) + "; definiens valid";
  return o;
}

Outcome criterion6(const MacroTable& t) {
  Outcome o;
  auto t0 = Clock::now();
  auto a = eliminate(expanded(t, "ex2([g], fo_col2(e))"));
  o.require(a.ok(), "fo_col2 elimination failed: " + a.reason);
  if (a.ok()) {
    o.require(!mentions_predicate(a.result, "g"), "g occurs in the result");
    o.require(oracle::equivalent(a.result, f("all([x, y], (e(x, y) -> (~((r(y), r(x))), (r(y) ; r(x)))))")),
              "fo_col2 result not equivalent: " + print_formula(a.result));
  }
  try {
    auto [shown, final] = eliminate_staged(f("lambda([u, v], ((u = 1, v = 2) ; (u = 2, v = 3)))"));
    o.require(oracle::equivalent(final, f("~(1 = 2), ~(2 = 3)")), "staged result: " + print_formula(final));
    if (o.ok) o.detail = print_formula(final);
  } catch (const Error& e) {
    o.require(false, std::string("staged elimination failed: ") + e.what());
  }
  double secs = seconds_since(t0);
  o.require(secs < 10.0, limit("colorability", secs, 10));
  return o;
}

Outcome criterion7() {
  Outcome o;
  double s = 0;
  auto h = timed(s, [] {
    return interpolate(f("(all(x, p(x)), all(x, (p(x) -> q(x)))) -> q(c)"), ProverConfig{}, InterpolationOptions{false});
  });
  o.require(s < 2.0, limit("interpolation", s, 2));
  o.require(print_formula(h.formula) == "all(x, q(x))", "interpolant is " + print_formula(h.formula));
  auto err = oracle::check_dot(emit_tableau_dot(h.proof));
  o.require(!err, "DOT check: " + err.value_or(""));
  if (o.ok) o.detail = print_formula(h.formula) + ", DOT ok";
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto t0 = Clock::now();
  const std::vector<std::string> pqr{"p", "q", "r"};

  // Elimination against the semantic quantifier and Shannon expansion.
  oracle::FormulaGen gen(pqr, 20240601u);
  int elim_cases = 0;
  for (int i = 0; i < 1200 && o.ok; ++i) {
    Formula body = gen.next(4);
    bool universal = i % 4 == 3;
    Formula q = universal ? Formula::forall2({{"p", 0}}, body) : Formula::exists2({{"p", 0}}, body);
    auto out = eliminate(q);
    o.require(out.ok(), "elimination failed on " + print_formula(q) + ": " + out.reason);
    if (!out.ok()) break;
    o.require(!oracle::atoms(out.result).contains("p"), "p left in " + print_formula(out.result));
    o.require(oracle::same_truth_table(out.result, q), "truth table differs for " + print_formula(q));
    Formula shannon = universal ? Formula::negation(eliminate_propositional("p", Formula::negation(body)))
                                : eliminate_propositional("p", body);
    o.require(oracle::same_truth_table(out.result, shannon), "disagrees with Shannon on " + print_formula(q));
    ++elim_cases;
  }

  // Clausification in both modes.
  oracle::FormulaGen cgen(pqr, 7u);
  int cnf_cases = 0;
  for (int i = 0; i < 1200 && o.ok; ++i) {
    Formula g = cgen.next(5);
    auto eq = clausify(g, ClausifyMode::Equivalence);
    o.require(oracle::same_truth_table(clauses_formula(eq.clauses), g), "equivalence CNF differs for " + print_formula(g));
    auto def = clausify(g, ClausifyMode::Definitional);
    auto atoms = oracle::atoms(g);
    std::vector<std::string> keep(atoms.begin(), atoms.end());
    for (const auto& c : def.clauses)
      for (const auto& l : c.literals)
        if (!atoms.contains(l.predicate) && !def.definitions.contains(l.predicate))
          o.require(false, "definitional CNF introduced an unrecorded atom " + l.predicate);
    o.require(oracle::projected_table(def.clauses, keep) == oracle::truth_table(g, keep),
              "definitional CNF differs for " + print_formula(g));
    ++cnf_cases;
  }

  // Interpolation on entailed pairs; the left side uses p,q and the right q,r.
  oracle::FormulaGen lgen({"p", "q"}, 11u), rgen({"q", "r"}, 13u), wgen(pqr, 17u);
  int ipol_cases = 0;
  for (int tries = 0; ipol_cases < 1000 && tries < 200000 && o.ok; ++tries) {
    bool shared = tries % 3 == 0;
    Formula l = shared ? wgen.next(3) : lgen.next(3);
    Formula r = shared ? wgen.next(3) : rgen.next(3);
    if (!oracle::prop_entails(l, r)) continue;
    try {
      auto h = interpolate(l, r);
      o.require(oracle::prop_entails(l, h.formula) && oracle::prop_entails(h.formula, r),
                "entailments fail for " + print_formula(l) + " / " + print_formula(r));
      auto bad = oracle::lyndon_violation(l, r, h.formula);
      o.require(!bad, "vocabulary violation " + bad.value_or("") + " in " + print_formula(h.formula));
    } catch (const Error& e) {
      o.require(false, "interpolation failed for " + print_formula(l) + " / " + print_formula(r) + ": " + e.what());
    }
    ++ipol_cases;
  }
  o.require(elim_cases >= 1000 && cnf_cases >= 1000 && ipol_cases >= 1000, "corpus smaller than 1000 instances");
  double secs = seconds_since(t0);
  o.require(secs < 60.0, limit("property suite", secs, 60));
  if (o.ok) {
    std::ostringstream d;
    d << elim_cases << " eliminations, " << cnf_cases << " clausifications, " << ipol_cases << " interpolations";
    o.detail = d.str();
  }
  return o;
}

Outcome criterion9() {
  // A few non-theorems so that countermodels are part of the sample.
  for (const char* s : {"p", "p -> q", "all(x, (p(x) -> q(x))) -> p(a)", "ex(x, p(x)) -> all(x, p(x))",
                        "(all(x, (q(x) -> r(x))), q(a)) -> ~r(a)"})
    validate(f(s));
  Outcome o;
  o.require(certs.first_error.empty(), certs.first_error);
  o.require(certs.tableaux > 0, "no tableaux observed");
  o.require(certs.models > 0, "no countermodels observed");
  std::ostringstream d;
  d << certs.tableaux << " tableaux, " << certs.models << " countermodels checked";
  if (o.ok) o.detail = d.str();
  return o;
}

Outcome criterion10() {
  Outcome o;
  LoadedDocument doc = load_document(fixture("showcase.pie"));
  std::string first = process_document(doc, {});
  std::string second = process_document(doc, {});
  o.require(first == second, "two runs differ");

  auto elim = latex::displays_after(first, "Result of elimination:");
  auto ipol = latex::displays_after(first, "Result of interpolation:");
  const std::vector<std::string> elim_expected{
      "all(x, (q(x) -> r(x)))",
      "rained_last_night ; sprinkler_was_on",
      "p(a), all(x, (p(x) -> x = a))",
      "(rained_last_night -> wet(grass)), (sprinkler_was_on -> wet(grass)), (wet(grass) -> wet(shoes)),"
      " all(x, (wet(x) -> (rained_last_night ; sprinkler_was_on))),"
      " all(x, ((wet(x), wet(grass)) -> (x = grass ; x = shoes)))"};
  const std::vector<std::string> ipol_expected{"p", "ex(x, all(y, p(x, y)))", "q(a), r(a)"};
  auto compare = [&](const std::vector<std::string>& got, const std::vector<std::string>& want, const char* kind) {
    o.require(got.size() == want.size(), std::string("wrong number of ") + kind + " displays");
    for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i) {
      try {
        Formula shown = latex::read_display(got[i]);
        o.require(oracle::equivalent(shown, f(want[i])), std::string(kind) + " display " + std::to_string(i + 1) +
                                                             " reads back as " + print_formula(shown));
      } catch (const std::exception& e) {
        o.require(false, std::string(kind) + " display " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  };
  compare(elim, elim_expected, "elimination");
  compare(ipol, ipol_expected, "interpolation");

  PrintOptions tex;
  tex.style = PrintStyle::Latex;
  for (const char* src : {"(kb1, (rained_last_night ; sprinkler_was_on)) -> wet(shoes)", "definiens(p(a), kb2, [p, s])"}) {
    std::string block = "\\pplIsValid{" + print_formula(parse_with_macros(doc.macros, src), tex) + ".}";
    o.require(first.find(block) != std::string::npos, std::string("no validity block for ") + src);
  }
  if (o.ok) o.detail = std::to_string(first.size()) + " bytes, identical, all displays found";
  return o;
}

}  // namespace

int main() {
  set_tableau_observer([](const Tableau& t) {
    ++certs.tableaux;
    if (auto err = oracle::check_tableau(t); err && certs.first_error.empty()) certs.first_error = "tableau: " + *err;
  });
  set_model_observer([](const Model& m, const Formula& negated) {
    ++certs.models;
    bool holds = false;
    try {
      holds = oracle::model_eval(m, negated);
    } catch (const std::exception& e) {
      if (certs.first_error.empty()) certs.first_error = std::string("model evaluation: ") + e.what();
      return;
    }
    if (!holds && certs.first_error.empty()) certs.first_error = "countermodel does not falsify " + print_formula(negated);
  });

  MacroTable macros;
  for (const char* name : {"abduction.pie", "circumscription.pie", "colorability.pie", "definability.pie"})
    for (const auto& item : load_document(fixture(name)).document.items)
      if (item.kind == DocumentItem::Kind::MacroDef) macros.define(item.macro);

  std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1},
      {2, [&] { return criterion2(macros); }},
      {3, [&] { return criterion3(macros); }},
      {4, [&] { return criterion4(macros); }},
      {5, [&] { return criterion5(macros); }},
      {6, [&] { return criterion6(macros); }},
      {7, criterion7},
      {8, criterion8},
      {9, criterion9},
      {10, criterion10},
  };
  int failed = 0;
  for (auto& [id, run] : criteria) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = seconds_since(t0);
    std::cout << "criterion " << std::setw(2) << id << ": " << (o.ok ? "PASS" : "FAIL") << "  (" << std::fixed
              << std::setprecision(2) << secs << " s)  " << o.detail << std::endl;
    if (!o.ok) ++failed;
  }
  set_tableau_observer(nullptr);
  set_model_observer(nullptr);
  return failed == 0 ? 0 : 1;
}
