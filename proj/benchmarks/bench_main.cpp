#include <benchmark/benchmark.h>

#include "currsim/dynamics.hpp"
#include "currsim/experiments.hpp"
#include "currsim/graph.hpp"
#include "currsim/theory.hpp"

namespace {

using namespace currsim;

void BM_GenerateER(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_er(n, 0.1, seed++));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * (n - 1) / 2));
}
BENCHMARK(BM_GenerateER)->Arg(100)->Arg(1000);

void BM_RunToEquilibrium(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0)) / 100.0;
  const Graph g = gen_er(100, p, 42);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto result = run_to_equilibrium(g, initial_state_distinct(g), Schedule::random_sequential,
                                     seed, seed + 1, default_max_steps(g.size()));
    seed += 2;
    benchmark::DoNotOptimize(result.switches);
  }
}
BENCHMARK(BM_RunToEquilibrium)->Arg(5)->Arg(15)->Arg(30);

void BM_SynchronousRun(benchmark::State& state) {
  const Graph g = gen_er(100, 0.15, 42);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto result = run_to_equilibrium(g, initial_state_distinct(g), Schedule::synchronous, seed,
                                     seed + 1, default_max_steps(g.size()));
    seed += 2;
    benchmark::DoNotOptimize(result.switches);
  }
}
BENCHMARK(BM_SynchronousRun);

void BM_RunOneReplication(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.topology = TwoCommunity{0.3, 0.1};
  std::size_t rep = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_one(cfg, rep++));
  }
}
BENCHMARK(BM_RunOneReplication);

void BM_FlipProbabilityExact(benchmark::State& state) {
  const theory::BoundParams params{static_cast<std::uint64_t>(state.range(0)), 0.3, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(theory::flip_probability_exact(params));
  }
}
BENCHMARK(BM_FlipProbabilityExact)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
