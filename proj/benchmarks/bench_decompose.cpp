#include <benchmark/benchmark.h>

#include "disloc/decomposition.hpp"
#include "disloc/generators.hpp"

using namespace disloc;

static void BM_TwoBumpDecompose(benchmark::State& state) {
  const EnergySpec spec = EnergySpec::inhomogeneous(1, 2.0);
  const MassSpec mass = MassSpec::make(4.0);
  FamilyOptions fo;
  fo.shift_radius = 56;
  const auto fam = TestFunctionalFamily::make(spec, mass, 1.0, fo);
  const auto seq = gen::two_bump(spec, 1.0, 1.25, 0.75, 4.0, 4, 12);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(seq, spec, fam));
}
BENCHMARK(BM_TwoBumpDecompose)->Unit(benchmark::kMillisecond);
