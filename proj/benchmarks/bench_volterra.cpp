#include <benchmark/benchmark.h>

#include "plrf/modes.hpp"
#include "plrf/problem.hpp"
#include "plrf/volterra.hpp"

namespace {

plrf::SpectralModes test_modes(int64_t d) {
  plrf::ProblemSpec spec;
  spec.alpha = 0.7;
  spec.beta = 0.7;
  spec.d = d;
  spec.v = 4 * d;
  spec.gamma = 0.2;
  spec.horizon = 1;
  spec.seed = 3;
  return plrf::empirical_modes(plrf::make_problem(spec));
}

void bm_solve_volterra_fast(benchmark::State& state) {
  const auto modes = test_modes(state.range(0));
  const auto sched = plrf::CheckpointSchedule::geometric_default(4096);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plrf::solve_volterra(modes, 0.2, 1, sched));
  }
}
BENCHMARK(bm_solve_volterra_fast)->Arg(32)->Arg(256);

void bm_solve_volterra_naive(benchmark::State& state) {
  const auto modes = test_modes(state.range(0));
  const auto sched = plrf::CheckpointSchedule::geometric_default(4096);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plrf::solve_volterra_naive(modes, 0.2, 1, sched));
  }
}
BENCHMARK(bm_solve_volterra_naive)->Arg(32)->Arg(256);

void bm_empirical_modes(benchmark::State& state) {
  plrf::ProblemSpec spec;
  spec.alpha = 0.7;
  spec.beta = 0.7;
  spec.d = state.range(0);
  spec.v = 4 * spec.d;
  spec.gamma = 0.2;
  spec.horizon = 1;
  spec.seed = 3;
  const auto inst = plrf::make_problem(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plrf::empirical_modes(inst));
  }
}
BENCHMARK(bm_empirical_modes)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
