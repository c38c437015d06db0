#include <benchmark/benchmark.h>

#include "ddforge/evolution.hpp"
#include "ddforge/filters.hpp"
#include "ddforge/montecarlo.hpp"
#include "ddforge/spectra.hpp"

using namespace ddforge;

namespace {

void BM_FilterControl(benchmark::State& state) {
  const auto seq = build_cpmg(4, 67.0, static_cast<int>(state.range(0)), 0.0);
  double f = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter_control(seq, 50.0 + f));
    f += 1e-6;
  }
}
BENCHMARK(BM_FilterControl)->Arg(40)->Arg(400);

void BM_FilterDephasing(benchmark::State& state) {
  const auto seq = build_cpmg(4, 67.0, static_cast<int>(state.range(0)), 0.0);
  double f = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter_dephasing(seq, 33.0 + f));
    f += 1e-6;
  }
}
BENCHMARK(BM_FilterDephasing)->Arg(40)->Arg(400);

void BM_LorentzianOverlap(benchmark::State& state) {
  const auto seq = build_cpmg(4, 67.0, 40, 0.0);
  const SpectralDensity env{SpectrumKind::environment,
                            {Lorentzian{1e-3, 0.01}}};
  for (auto _ : state)
    benchmark::DoNotOptimize(overlap(env, seq, FilterKind::dephasing));
}
BENCHMARK(BM_LorentzianOverlap);

void BM_NoiseSynthesis(benchmark::State& state) {
  const SpectralDensity env{SpectrumKind::environment,
                            {Lorentzian{1.0, 0.01}}};
  const auto samples = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_noise_series(env, 1e-4, samples, 1.675, seed++));
  }
  state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_NoiseSynthesis)->Arg(1000)->Arg(6000);

void BM_Realization(benchmark::State& state) {
  const double t_total = 40.0 / 67.0;
  const double dt = t_total / 6000.0;
  const auto seq = build_cpmg(4, 67.0, 40, 20.0 * dt);
  const SpectralDensity env{SpectrumKind::environment,
                            {Lorentzian{100.0, 0.01}}};
  const SpectralDensity ctrl{SpectrumKind::control, {}};
  const auto delta = sample_noise_series(env, dt, 6001, 1.675, 1);
  const auto nc = sample_noise_series(ctrl, dt, 6001, 1.675, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        evolve_realization(seq, delta, nc, {0, 0, -1}, dt));
  }
  state.SetItemsProcessed(state.iterations() * 6000);
}
BENCHMARK(BM_Realization);

}  // namespace

BENCHMARK_MAIN();
