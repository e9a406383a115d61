#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "penrose/conformal_data.hpp"
#include "penrose/flow.hpp"
#include "penrose/levelset.hpp"
#include "penrose/ring_potential.hpp"
#include "penrose/surface.hpp"

using namespace penrose;

namespace {

void BM_RingPotential(benchmark::State& state) {
  double rho = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(elliptic::ring_potential(0.7, 0.1, rho, 0.9));
    rho += 1e-9;
  }
}
BENCHMARK(BM_RingPotential);

void BM_MinimalSphereRadius(benchmark::State& state) {
  const auto data = ConformalData::smoothed_pole(1.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(horizon::minimal_sphere_radius(data));
}
BENCHMARK(BM_MinimalSphereRadius);

void BM_AxisymFinderBrillLindquist(benchmark::State& state) {
  const auto data = ConformalData::brill_lindquist(0.5, 0.5, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(horizon::outermost_surface_axisym(data));
}
BENCHMARK(BM_AxisymFinderBrillLindquist)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_RadialFlow(benchmark::State& state) {
  const auto data = ConformalData::smoothed_pole(1.0, 0.1);
  flow::FlowConfig cfg;
  cfg.dt = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(flow::run_flow(data, cfg));
}
BENCHMARK(BM_RadialFlow)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LevelSetAccumulate(benchmark::State& state) {
  const auto traj = flow::run_flow(ConformalData::smoothed_pole(1.0, 0.1), flow::FlowConfig{});
  const auto slices = levelset::solve_slices(traj);
  levelset::LevelSetConfig cfg;
  cfg.points_per_decade = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(levelset::accumulate_QP(traj, slices, cfg));
}
BENCHMARK(BM_LevelSetAccumulate)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
