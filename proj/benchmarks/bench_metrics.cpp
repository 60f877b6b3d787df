#include <vector>

#include <benchmark/benchmark.h>

#include "mogfade/metrics.hpp"

using namespace mogfade;

namespace {

MoGModel table2() {
  return MoGModel::normalized({{0.11009, 0.48576, 0.14483},
                               {0.14047, 1.3455, 0.34267},
                               {0.37935, 1.0845, 0.25099},
                               {0.37009, 0.77746, 0.19545}},
                              3.1622776601683795);
}

}  // namespace

static void BM_Ser16QamTwoBranch(benchmark::State& state) {
  const std::vector<MoGModel> b{table2(), table2()};
  for (auto _ : state) benchmark::DoNotOptimize(ser(b, SerScheme::mqam(16)));
}
BENCHMARK(BM_Ser16QamTwoBranch);

static void BM_PdSeries(benchmark::State& state) {
  DetectorSpec det;
  det.u = 3;
  det.target_pf = 0.1;
  const auto m = table2();
  for (auto _ : state) benchmark::DoNotOptimize(avg_pd_series(m, det, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PdSeries)->Arg(12)->Arg(40);

static void BM_PdQuadrature(benchmark::State& state) {
  DetectorSpec det;
  det.u = 3;
  det.target_pf = 0.1;
  const auto m = table2();
  for (auto _ : state) benchmark::DoNotOptimize(avg_pd_quadrature(m, det));
}
BENCHMARK(BM_PdQuadrature)->Unit(benchmark::kMillisecond);
