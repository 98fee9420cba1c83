#include <benchmark/benchmark.h>

#include "collapse/dtree.hpp"

using namespace collapse;

static void BM_EstimateGamma(benchmark::State& state) {
  const auto t = static_cast<std::uint32_t>(state.range(0));
  const auto sampling = state.range(1) ? TreeSampling::kLazy : TreeSampling::kFullTree;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_gamma(3.0, 2, t, 1000, seed++, sampling).value);
}
BENCHMARK(BM_EstimateGamma)
    ->ArgsProduct({{2, 4, 6}, {0, 1}})
    ->ArgNames({"t", "lazy"})
    ->Unit(benchmark::kMillisecond);

static void BM_TauCollapse(benchmark::State& state) {
  const auto tree = sample_dtree(3.0, 2, static_cast<std::uint32_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(tau_collapse(tree, tree.radius()).root_degree);
  state.counters["ridges"] = static_cast<double>(tree.ridge_count());
}
BENCHMARK(BM_TauCollapse)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);
