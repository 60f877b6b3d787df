#include <benchmark/benchmark.h>

#include "mogfade/special_fn.hpp"

using namespace mogfade::special;

static void BM_GaussianQ(benchmark::State& state) {
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_q(x));
    x = x > 6.0 ? -3.0 : x + 0.01;
  }
}
BENCHMARK(BM_GaussianQ);

static void BM_Kummer1F1(benchmark::State& state) {
  const double z = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kummer_1f1(2.5, 1.5, z));
}
BENCHMARK(BM_Kummer1F1)->Arg(-40)->Arg(-1)->Arg(1)->Arg(40);

static void BM_ParabolicCylinder(benchmark::State& state) {
  const double z = static_cast<double>(state.range(0)) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(parabolic_cylinder_d(-7.0, z));
}
BENCHMARK(BM_ParabolicCylinder)->Arg(-8)->Arg(0)->Arg(2)->Arg(8);

static void BM_MarcumQ(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(marcum_q(3, a, 3.0));
}
BENCHMARK(BM_MarcumQ)->Arg(1)->Arg(5)->Arg(20);
