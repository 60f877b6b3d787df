#include <benchmark/benchmark.h>

#include "mogfade/mog.hpp"

using namespace mogfade;

static void BM_EmFit(benchmark::State& state) {
  const auto xs = sample_envelope(ChannelSpec::nakagami_lognormal(2.0, 1.0), static_cast<std::size_t>(state.range(0)), 1);
  FitConfig cfg;
  cfg.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(em_fit(xs, static_cast<int>(state.range(1)), cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmFit)->Args({10'000, 4})->Args({100'000, 4})->Args({100'000, 8})->Unit(benchmark::kMillisecond);

static void BM_SampleEnvelope(benchmark::State& state) {
  const auto spec = ChannelSpec::kappa_mu_shadowed(1.0, 3.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_envelope(spec, 100'000, 7));
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_SampleEnvelope)->Unit(benchmark::kMillisecond);
