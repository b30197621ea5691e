// Serial reference versus OpenMP path for the hot kernels. The second
// benchmark argument selects the path: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "carleson/ball.hpp"
#include "carleson/bergman.hpp"
#include "carleson/integrate.hpp"
#include "carleson/invariant_measure.hpp"
#include "carleson/sequences.hpp"

using namespace carleson;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::serial : Exec::parallel;
}

void BM_IntegrateDensity(benchmark::State& state) {
  MCConfig mc;
  mc.n_samples = static_cast<std::size_t>(state.range(0));
  mc.exec = exec_of(state);
  const auto region = kobayashi_ball(Point::basis(2, 0, 0.6), 0.5).ellipsoid();
  const Integrand f = [](const Point& z) { return ek_density(z); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate_density(f, region, mc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BerezinTransform(benchmark::State& state) {
  MCConfig mc;
  mc.n_samples = static_cast<std::size_t>(state.range(0));
  mc.exec = exec_of(state);
  const Measure mu = Measure::power(2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(berezin_transform(mu, Point::basis(2, 0, 0.9), mc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SeparationSweep(benchmark::State& state) {
  const PointSequence G(sample_unit_ball(2, static_cast<std::size_t>(state.range(0)), 1));
  for (auto _ : state) benchmark::DoNotOptimize(separation_constant(G, exec_of(state)));
}

void BM_SeparationPairwise(benchmark::State& state) {
  const PointSequence G(sample_unit_ball(2, static_cast<std::size_t>(state.range(0)), 1));
  for (auto _ : state) benchmark::DoNotOptimize(separation_constant_bruteforce(G, exec_of(state)));
}

void BM_CountInBalls(benchmark::State& state) {
  const PointSequence G(sample_unit_ball(2, static_cast<std::size_t>(state.range(0)), 2));
  const auto probes = sample_unit_ball(2, 2000, 3);
  for (auto _ : state) benchmark::DoNotOptimize(count_in_balls(G, probes, 0.5, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_IntegrateDensity)->ArgsProduct({{100000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BerezinTransform)->ArgsProduct({{100000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeparationSweep)->ArgsProduct({{20000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeparationPairwise)->ArgsProduct({{4000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountInBalls)->ArgsProduct({{20000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
