#include <benchmark/benchmark.h>

#include "mnm/calculus.hpp"
#include "mnm/derivations.hpp"
#include "mnm/dugundji.hpp"
#include "mnm/recovery.hpp"
#include "mnm/semantics.hpp"

using namespace mnm;

static void BM_DecideAxiomSkeleton(benchmark::State& state) {
  const Nmatrix& km = builtin(SystemId::Km);
  Formula k_prime = skeletonize(find_schema("K'")->schema);
  for (auto _ : state)
    benchmark::DoNotOptimize(decide_valid(km, k_prime).holds);
}
BENCHMARK(BM_DecideAxiomSkeleton);

static void BM_DecideDelta(benchmark::State& state) {
  const int n = int(state.range(0));
  DugundjiFormula d = build_delta(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(falsify(SystemId::T45m, d).has_value());
}
BENCHMARK(BM_DecideDelta)->Arg(3)->Arg(4)->Arg(5)->Arg(6);

static void BM_OracleSmallQuery(benchmark::State& state) {
  const Nmatrix& km = builtin(SystemId::Km);
  std::vector<Formula> prem = {parse("[](p->q)"), parse("[]p")};
  Formula concl = parse("[]q");
  for (auto _ : state)
    benchmark::DoNotOptimize(
        brute_force_consequence(km, prem, concl).holds);
}
BENCHMARK(BM_OracleSmallQuery);

static void BM_DerivedOrTable(benchmark::State& state) {
  const Nmatrix& km = builtin(SystemId::Km);
  Schema skel = parse_schema("~A -> B");
  for (auto _ : state) {
    DerivedTable dt = derived_table(km, skel);
    benchmark::DoNotOptimize(dt.cells.size());
  }
}
BENCHMARK(BM_DerivedOrTable);

static void BM_Size2Scan(benchmark::State& state) {
  Formula d3 = build_delta(3).formula;
  ScanOptions opts;
  opts.jobs = int(state.range(0));
  for (auto _ : state) {
    ScanReport r = scan_matrices(2, SystemId::Km, d3, opts);
    benchmark::DoNotOptimize(r.models);
  }
}
BENCHMARK(BM_Size2Scan)->Arg(1)->Arg(4);

static void BM_DatSearch(benchmark::State& state) {
  DatQuery q{DatKind::KmFromTm, {parse("[](p -> q)"), parse("[]p")},
             parse("<>q")};
  for (auto _ : state) {
    DatSearchResult r = dat_search(q);
    benchmark::DoNotOptimize(r.witness.has_value());
  }
}
BENCHMARK(BM_DatSearch);

static void BM_CheckLargeDerivation(benchmark::State& state) {
  // the largest machine-built corpus entry (a few hundred steps)
  Derivation biggest = derivation_corpus().front().derivation;
  for (const CorpusEntry& e : derivation_corpus())
    if (e.derivation.steps.size() > biggest.steps.size())
      biggest = e.derivation;
  for (auto _ : state)
    benchmark::DoNotOptimize(check_derivation(biggest).has_value());
}
BENCHMARK(BM_CheckLargeDerivation);

static void BM_ParseRender(benchmark::State& state) {
  std::string text =
      "(([]((p1 | p2) | p3) -> [](p2 | p3)) | ([]((p1 | p2) | p3) -> "
      "[](p1 | p3))) | ([]((p1 | p2) | p3) -> [](p1 | p2))";
  for (auto _ : state) {
    Formula f = parse(text);
    benchmark::DoNotOptimize(render(f).size());
  }
}
BENCHMARK(BM_ParseRender);

BENCHMARK_MAIN();
