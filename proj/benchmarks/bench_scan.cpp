#include <benchmark/benchmark.h>

#include "disloc/generators.hpp"
#include "disloc/test_family.hpp"

using namespace disloc;

static void BM_DefectScan(benchmark::State& state) {
  const EnergySpec spec = EnergySpec::inhomogeneous(1, 2.0);
  const MassSpec mass = MassSpec::make(4.0);
  FamilyOptions fo;
  fo.shift_radius = static_cast<int>(state.range(0));
  const auto fam = TestFunctionalFamily::make(spec, mass, 1.0, fo);
  const GridFunction u = gen::tent(1, 1.0, 0, 1.0, 4.0, {state.range(0) / 2});
  for (auto _ : state) benchmark::DoNotOptimize(d_weak_defect(u, fam));
}
BENCHMARK(BM_DefectScan)->Arg(16)->Arg(64)->Arg(256);
