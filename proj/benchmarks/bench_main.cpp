#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "semiclassical/bohmian.hpp"
#include "semiclassical/measures.hpp"
#include "semiclassical/scenario.hpp"
#include "semiclassical/solver.hpp"
#include "semiclassical/spectral.hpp"

namespace {

// Caustic initial state; epsilon grows on coarse grids so the state stays resolved.
scl::Field caustic_state(std::size_t n) {
  scl::ScenarioSpec spec = scl::catalog_spec(scl::ScenarioName::free_caustic);
  spec.modes = n;
  spec.epsilon = std::max(1e-3, 4.096 / static_cast<double>(n));
  return scl::init_state(spec.grid(), spec.initial_data(), spec.epsilon);
}

void BM_StrangStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const scl::Field f = caustic_state(n);
  const scl::StrangPropagator prop(f.grid(), scl::Potential::harmonic(0.5, 1.0), 1e-3, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(prop.step(f));
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

void BM_InterpolantBuild(benchmark::State& state) {
  const scl::Field f = caustic_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scl::Interpolant(f));
}
BENCHMARK(BM_InterpolantBuild)->Arg(1 << 12);

void BM_Velocity(benchmark::State& state) {
  const scl::Field f = caustic_state(static_cast<std::size_t>(state.range(0)));
  const scl::Interpolant in(f);
  const double floor = scl::density_floor(f);
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(in.velocity(x, 1e-3, floor));
    x += 1e-4;
  }
}
BENCHMARK(BM_Velocity)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

void BM_VelocityBatch(benchmark::State& state) {
  const scl::Field f = caustic_state(1 << 12);
  const scl::Interpolant in(f);
  const double floor = scl::density_floor(f);
  std::vector<double> xs(static_cast<std::size_t>(state.range(0))), out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 0.1 + 0.8 * static_cast<double>(i) / static_cast<double>(xs.size());
  for (auto _ : state) {
    in.velocities(xs, 1e-3, floor, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VelocityBatch)->Arg(41)->Arg(400);

void BM_BohmianStep(benchmark::State& state) {
  const scl::Field f = caustic_state(1 << 12);
  std::vector<double> seeds(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = 0.1 + 0.8 * static_cast<double>(i) / static_cast<double>(seeds.size());
  scl::BohmianIntegrator integ(f, scl::Potential::zero(), 1e-3, 6e-5, seeds);
  for (auto _ : state) integ.step();
}
BENCHMARK(BM_BohmianStep)->Arg(1)->Arg(41)->Arg(400);

void BM_TorusSampling(benchmark::State& state) {
  const std::vector<scl::cplx> b{{1.0, 0.0}, {0.0, -0.7}, {0.5, 0.0}};
  const std::vector<double> g{-0.8, 0.0, 0.8};
  scl::TorusSampling ts;
  ts.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scl::limiting_bohmian_measure(b, g, ts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TorusSampling)->Arg(100'000);

void BM_WignerTransform(benchmark::State& state) {
  const scl::Field f = caustic_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scl::wigner_transform_numeric(f, 1e-3, 16));
}
BENCHMARK(BM_WignerTransform)->Arg(1 << 12);

}  // namespace

BENCHMARK_MAIN();
