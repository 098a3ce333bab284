#include <benchmark/benchmark.h>

#include <vector>

#include "rbb/exact_oracle.hpp"
#include "rbb/process.hpp"
#include "rbb/traversal.hpp"

namespace {

// One rbb round at average load m/n = 10 from a one-choice start.
void BM_RbbStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  rbb::RandomSource rng(42);
  rbb::LoadVector x = rbb::one_choice_run(n, static_cast<rbb::Load>(10 * n), rng);
  std::vector<std::size_t> draws;
  for (auto _ : state) {
    rbb::rbb_step_inplace(x, rng, draws);
    benchmark::DoNotOptimize(x);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RbbStep)->Arg(100)->Arg(1000)->Arg(10000);

// One FIFO round with coverage bookkeeping, m = n.
void BM_TraversalStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto q = rbb::QueueSystem::from_loads(rbb::InitialConfig::uniform().build(n, static_cast<rbb::Load>(n)));
  auto cov = rbb::CoverageTracker::start(q);
  rbb::TraversalStreams rng(rbb::RandomSource(42));
  for (auto _ : state) {
    rbb::traversal_step(q, cov, rbb::TieBreakPolicy::by_ball_id(), rng);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_TraversalStep)->Arg(100)->Arg(1000);

// Exact one-step law by tuple enumeration; cost grows as n^kappa.
void BM_OneStepDistribution(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const rbb::LoadVector x = rbb::InitialConfig::uniform().build(n, static_cast<rbb::Load>(n));
  for (auto _ : state) benchmark::DoNotOptimize(rbb::one_step_distribution(x));
}
BENCHMARK(BM_OneStepDistribution)->DenseRange(2, 6);

}  // namespace

BENCHMARK_MAIN();
