#include <benchmark/benchmark.h>

#include "pie/elimination.hpp"
#include "pie/interpolation.hpp"
#include "pie/macros.hpp"
#include "pie/preprocess.hpp"
#include "pie/prover.hpp"
#include "pie/syntax.hpp"

namespace {

const char* kKb1 =
    "def(kb1) :: (sprinkler_was_on -> wet(grass)), (rained_last_night -> wet(grass)), (wet(grass) -> wet(shoes)).";
const char* kCirc =
    "def(circ(P, F)) :: F, ~ex2(P_p, (F_p, T1, ~T2)) ::- mac_rename_free_predicate(F, P, pn, F_p, P_p), "
    "mac_get_arity(P, F, A), mac_transfer_clauses([P/A-n], p, [P_p], T1), "
    "mac_transfer_clauses([P/A-n], n, [P_p], T2).";

pie::MacroTable table() {
  pie::MacroTable t;
  t.define(pie::read_definition(pie::parse_syntax(kKb1)));
  t.define(pie::read_definition(pie::parse_syntax(kCirc)));
  return t;
}

// n-element chain p1 -> p2 -> ... -> pn as one formula.
std::string chain(int n) {
  std::string s = "p1";
  for (int i = 1; i < n; ++i) s = "(" + s + ", (p" + std::to_string(i) + " -> p" + std::to_string(i + 1) + "))";
  return s;
}

void BM_Parse(benchmark::State& state) {
  const std::string src = "ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))))";
  for (auto _ : state) benchmark::DoNotOptimize(pie::parse_formula(src));
}
BENCHMARK(BM_Parse);

void BM_ClausifyChain(benchmark::State& state) {
  pie::Formula f = pie::parse_formula(chain(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(pie::clausify(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClausifyChain)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_ProveChain(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  pie::Formula f = pie::parse_formula(chain(n) + " -> p" + std::to_string(n));
  for (auto _ : state) benchmark::DoNotOptimize(pie::validate(f));
}
BENCHMARK(BM_ProveChain)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_EliminateIntermediate(benchmark::State& state) {
  pie::Formula f = pie::parse_formula("ex2(p, (all(x, (q(x) -> p(x))), all(x, (p(x) -> r(x)))))");
  for (auto _ : state) benchmark::DoNotOptimize(pie::eliminate(f));
}
BENCHMARK(BM_EliminateIntermediate)->Unit(benchmark::kMicrosecond);

void BM_Circumscription(benchmark::State& state) {
  auto t = table();
  pie::MacroContext ctx;
  pie::Formula f = pie::expand(t, pie::parse_with_macros(t, "circ(wet, kb1)"), ctx);
  pie::EliminationOptions opts;
  opts.simp_result = pie::Pipeline::C6;
  for (auto _ : state) benchmark::DoNotOptimize(pie::eliminate(f, opts));
}
BENCHMARK(BM_Circumscription)->Unit(benchmark::kMillisecond);

void BM_Interpolate(benchmark::State& state) {
  pie::Formula f = pie::parse_formula("(all(x, p(a, x)), q) -> (ex(x, p(x, b)) ; r)");
  for (auto _ : state) benchmark::DoNotOptimize(pie::interpolate(f));
}
BENCHMARK(BM_Interpolate)->Unit(benchmark::kMillisecond);

void BM_StagedColorability(benchmark::State& state) {
  pie::Formula e = pie::parse_formula("lambda([u, v], ((u = 1, v = 2) ; (u = 2, v = 3)))");
  for (auto _ : state) benchmark::DoNotOptimize(pie::eliminate_staged(e));
}
BENCHMARK(BM_StagedColorability)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
