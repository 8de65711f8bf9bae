#include <benchmark/benchmark.h>

#include "toeplitz/cells.hpp"
#include "toeplitz/density.hpp"
#include "toeplitz/measures.hpp"
#include "toeplitz/periods.hpp"
#include "toeplitz/presets.hpp"

using namespace toeplitz;

namespace {

SkeletonPtr threeadic(std::size_t depth) { return build_skeleton(build_tower(preset_config("threeadic")), depth); }

void BM_RegularityVerdict(benchmark::State& state) {
  auto tower = build_tower(preset_config("irregular-demo"));
  for (auto _ : state) benchmark::DoNotOptimize(regularity_verdict(*tower));
}
BENCHMARK(BM_RegularityVerdict);

void BM_DensityByEnumeration(benchmark::State& state) {
  auto s = threeadic(8);
  for (auto _ : state) benchmark::DoNotOptimize(d_by_enumeration(*s, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_DensityByEnumeration)->Arg(5)->Arg(7);

void BM_PerEq(benchmark::State& state) {
  const ToeplitzArray eta(threeadic(6));
  for (auto _ : state) benchmark::DoNotOptimize(per_eq_check(eta, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_PerEq)->Arg(4)->Arg(6);

void BM_PeriodicMeasureCylinder(benchmark::State& state) {
  auto s = threeadic(6);
  const PeriodicMeasure mu(s, 5);
  Pattern p;
  for (long g : {0L, 1L, 4L, 13L}) p.support.push_back(Element({g}));
  p.values = {1, 0, 1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(mu_cylinder(mu, p));
}
BENCHMARK(BM_PeriodicMeasureCylinder);

void BM_ZIdentity(benchmark::State& state) {
  const CellAlgebra cells(threeadic(5));
  for (auto _ : state) benchmark::DoNotOptimize(z_identity_check(cells, 5));
}
BENCHMARK(BM_ZIdentity)->Unit(benchmark::kMillisecond);

}  // namespace
