// Microbenchmarks for the two hot paths: plan optimization and the local
// band join inside one partition.

#include <benchmark/benchmark.h>

#include "bandjoin/datagen.hpp"
#include "bandjoin/executor.hpp"
#include "bandjoin/optimizer.hpp"
#include "bandjoin/sampling.hpp"

using namespace bandjoin;

namespace {

Relation pareto_rel(size_t n, int d, uint64_t seed) {
  GenSpec g;
  g.kind = GenSpec::Kind::Pareto;
  g.n = n;
  g.d = d;
  g.z = 1.5;
  g.seed = seed;
  return gen(g);
}

void BM_optimize(benchmark::State& state) {
  const size_t k = static_cast<size_t>(state.range(0));
  Relation S = pareto_rel(200000, 1, 23);
  Relation T = pareto_rel(200000, 1, 24);
  BandSpec spec(1, {2.5e-5}, 4.0, 1.0);
  SampleSet samples = make_sample_set(S, T, spec, k, 200000, 11, 80000);
  OptimizerConfig cfg;
  cfg.w = 30;
  cfg.maxIterations = 300;
  cfg.windowFraction = 4.0;
  for (auto _ : state) {
    OptimizeResult res = optimize(samples, spec, cfg);
    benchmark::DoNotOptimize(res.tree.numLeaves);
    state.counters["iterations"] = res.iterations;
  }
}
BENCHMARK(BM_optimize)->Arg(1000)->Arg(4000)->Arg(16000)
    ->Unit(benchmark::kMillisecond);

void BM_local_band_join(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  Relation S = pareto_rel(n, 1, 5);
  Relation T = pareto_rel(n, 1, 6);
  BandSpec spec(1, {1e-4}, 4.0, 1.0);
  for (auto _ : state) {
    auto out = local_band_join(S.tuples, T.tuples, spec);
    benchmark::DoNotOptimize(out.size());
    state.counters["pairs"] = static_cast<double>(out.size());
  }
}
BENCHMARK(BM_local_band_join)->Arg(10000)->Arg(50000)->Arg(200000)
    ->Unit(benchmark::kMillisecond);

void BM_route_all(benchmark::State& state) {
  Relation S = pareto_rel(200000, 1, 23);
  Relation T = pareto_rel(200000, 1, 24);
  BandSpec spec(1, {2.5e-5}, 4.0, 1.0);
  SampleSet samples = make_sample_set(S, T, spec, 4000, 200000, 11, 80000);
  OptimizerConfig cfg;
  cfg.w = 30;
  cfg.maxIterations = 300;
  cfg.windowFraction = 4.0;
  SplitTree tree = optimize(samples, spec, cfg).tree;
  for (auto _ : state) {
    RoutedInput routed = route_all(S, T, tree, spec, 11);
    benchmark::DoNotOptimize(routed.totalInput);
  }
}
BENCHMARK(BM_route_all)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
