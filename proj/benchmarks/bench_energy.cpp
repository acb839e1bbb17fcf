#include <benchmark/benchmark.h>

#include "disloc/energy.hpp"
#include "disloc/generators.hpp"
#include "disloc/rng.hpp"

using namespace disloc;

static void BM_EvalF_1D(benchmark::State& state) {
  const EnergySpec spec = EnergySpec::inhomogeneous(1, 2.0);
  Rng rng(1);
  const GridFunction u = gen::random_smooth(rng, 1, 1.0 / state.range(0), 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval_F(u, spec));
  state.SetComplexityN(static_cast<int64_t>(u.size()));
}
BENCHMARK(BM_EvalF_1D)->Arg(8)->Arg(32)->Arg(128)->Complexity();

static void BM_EvalF_2D(benchmark::State& state) {
  const EnergySpec spec = EnergySpec::homogeneous(2, 1.5);
  Rng rng(2);
  const GridFunction u = gen::random_smooth(rng, 2, 1.0 / state.range(0), 6.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval_F(u, spec));
  state.SetComplexityN(static_cast<int64_t>(u.size()));
}
BENCHMARK(BM_EvalF_2D)->Arg(2)->Arg(4)->Arg(8)->Complexity();

static void BM_GaugeNorm(benchmark::State& state) {
  const EnergySpec spec = EnergySpec::inhomogeneous(1, 2.0);
  Rng rng(3);
  const GridFunction u = gen::random_smooth(rng, 1, 0.05, 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(gauge_norm(u, spec));
}
BENCHMARK(BM_GaugeNorm);
