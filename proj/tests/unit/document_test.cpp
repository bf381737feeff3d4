#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "latex_reader.hpp"
#include "oracles.hpp"
#include "pie/document.hpp"
#include "pie/error.hpp"

using namespace pie;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OptionList opts(std::string_view src) { return read_options(parse_syntax(src)); }

bool contains(const std::string& hay, std::string_view needle) { return hay.find(needle) != std::string::npos; }

const char* kKb =
    "def(kb1) :: (sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), "
    "(wet(grass) -> wet(shoes)).\n";

}  // namespace

TEST_CASE("loading") {
  auto doc = load_document(kKb);
  REQUIRE(doc.document.items.size() == 1);
  CHECK(doc.document.items[0].kind == DocumentItem::Kind::MacroDef);
  CHECK(doc.macros.lookup("kb1", 0).size() == 1);
  CHECK(load_document("").document.items.empty());
  CHECK_THROWS_AS(load_document("def(kb1) :: (p"), SyntaxError);
}

TEST_CASE("block comments pass through") {
  auto doc = load_document("/*\nhello\n*/\n");
  REQUIRE(doc.document.items.size() == 1);
  CHECK(doc.document.items[0].kind == DocumentItem::Kind::Latex);
  CHECK(contains(process_document(doc), "hello"));
}

TEST_CASE("directives render results") {
  auto doc = load_document(std::string(kKb) +
                           "def(explanation(Kb, Na, Ob)) :: all2(Na, (Kb -> Ob)).\n"
                           ":- ppl_printtime(ppl_elim(explanation(kb1,[wet],wet(shoes)))).\n");
  std::string out = process_document(doc);
  CHECK(contains(out, "Result of elimination:"));
  auto displays = latex::displays_after(out, "Result of elimination:");
  REQUIRE(displays.size() == 1);
  CHECK(oracle::same_truth_table(latex::read_display(displays[0]), F("sprinkler_was_on ; rained_last_night")));
}

TEST_CASE("printing=false stores the last result") {
  auto doc = load_document(kKb);
  ProcessingContext ctx;
  ctx.document = &doc;
  Options o = resolve_options(system_defaults(), {}, opts("[printing=false]"));
  CHECK_FALSE(o.printing);
  auto r = run_directive(DirectiveKind::Elim, F("ex2(p, (p, q))"), o, ctx);
  CHECK(r.status == DirectiveResult::Status::Ok);
  REQUIRE(ctx.macro.last_result.has_value());
  CHECK(*ctx.macro.last_result == F("q"));
  CHECK(ctx.output.empty());
}

TEST_CASE("option layering") {
  OptionList sys = opts("[timeout=100]");
  OptionList doc = opts("[timeout=200]");
  OptionList dir = opts("[timeout=300]");
  CHECK(resolve_options(sys, {}, {}).timeout.count() == 100);
  CHECK(resolve_options(sys, doc, {}).timeout.count() == 200);
  CHECK(resolve_options(sys, doc, dir).timeout.count() == 300);
  CHECK(resolve_options(sys, {}, dir).timeout.count() == 300);

  Options nested = resolve_options(system_defaults(), {}, opts("[elim_options=[pre=[c6]], r=F1]"));
  CHECK(nested.pre == Pipeline::C6);
  REQUIRE(nested.result_slot.has_value());
  CHECK(*nested.result_slot == "F1");
  CHECK(resolve_options(system_defaults(), {}, opts("[simp_result=[d6]]")).simp_result == Pipeline::D6);
}

TEST_CASE("document defaults apply to later directives") {
  auto doc = load_document(":- ppl_set_defaults([printing=false]).\n:- ppl_printtime(ppl_elim(ex2(p, (p, q)))).\n");
  CHECK(doc.document.items[0].kind == DocumentItem::Kind::ConfigDefault);
  CHECK_FALSE(contains(process_document(doc), "Result of elimination"));
}

TEST_CASE("reload replaces definitions and is idempotent") {
  auto base = load_document(kKb);
  auto once = reload_document(base, "def(kb1) :: p.\n:- ppl_printtime(ppl_form(kb1)).\n");
  auto twice = reload_document(once, "def(kb1) :: p.\n:- ppl_printtime(ppl_form(kb1)).\n");
  CHECK(once.macros.lookup("kb1", 0).size() == 1);
  CHECK(process_document(once) == process_document(twice));
}

TEST_CASE("processing is deterministic") {
  std::string src = slurp(std::string(PIE_FIXTURE_DIR) + "/abduction.pie");
  auto a = process_document(load_document(src));
  auto b = process_document(load_document(src));
  CHECK(a == b);
  CHECK(contains(a, "\\pplIsValid"));
}

TEST_CASE("failures are rendered inline") {
  auto doc = load_document(":- ppl_printtime(ppl_valid(p)).\n"
                           ":- ppl_printtime(ppl_elim(ex2(p, (p(a), ~p(b), all([x, y], ((p(x), r(x, y)) -> p(y))))))).\n"
                           ":- ppl_printtime(ppl_valid(q)).\n");
  std::string out = process_document(doc);
  CHECK(contains(out, "\\pplIsNotValid"));
  // Processing continues after the failed elimination.
  auto first = out.find("\\pplIsNotValid");
  CHECK(out.find("\\pplIsNotValid", first + 1) != std::string::npos);
}

TEST_CASE("ip_dotgraph writes a DOT file") {
  auto dir = std::filesystem::temp_directory_path() / "pie_unit_dot";
  std::filesystem::create_directories(dir);
  auto png = (dir / "t.png").string();
  std::filesystem::remove(dir / "t.dot");
  auto doc = load_document(":- ppl_printtime(ppl_ipol((all(x, p(x)), all(x, (p(x) -> q(x))) -> q(c)),"
                           " [ip_dotgraph=printstyle('" + png + "')])).\n");
  std::string out = process_document(doc);
  CHECK(contains(out, "Result of interpolation:"));
  REQUIRE(std::filesystem::exists(dir / "t.dot"));
  auto err = oracle::check_dot(slurp((dir / "t.dot").string()));
  CHECK_MESSAGE(!err.has_value(), (err ? *err : ""));
}

TEST_CASE("standalone output wraps the body") {
  std::string s = standalone_latex("BODY");
  CHECK(contains(s, "\\begin{document}"));
  CHECK(contains(s, "BODY"));
  CHECK(contains(s, latex_preamble()));
}
