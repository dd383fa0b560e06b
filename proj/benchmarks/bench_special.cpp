#include <benchmark/benchmark.h>

#include "gpnet/special.hpp"

namespace {

void BM_BesselK_SmallX(benchmark::State& state) {
  double x = 0.5, nu = 0.733;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gpnet::bessel_k(nu, x));
    x = x < 1.9 ? x + 1e-4 : 0.5;  // stay in the series branch
  }
}
BENCHMARK(BM_BesselK_SmallX);

void BM_BesselK_LargeX(benchmark::State& state) {
  double x = 2.5, nu = 1.21;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gpnet::bessel_k(nu, x));
    x = x < 40.0 ? x + 1e-3 : 2.5;
  }
}
BENCHMARK(BM_BesselK_LargeX);

void BM_MaternCorr(benchmark::State& state) {
  const gpnet::MaternParams p{0.85, 10.0};
  double h = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gpnet::matern_corr(h, p));
    h = h < 1.0 ? h + 1e-4 : 0.0;
  }
}
BENCHMARK(BM_MaternCorr);

void BM_GammaFactor(benchmark::State& state) {
  double ni = 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gpnet::gamma_factor(ni, 1.4, 2));
    ni = ni < 2.0 ? ni + 1e-3 : 0.2;
  }
}
BENCHMARK(BM_GammaFactor);

}  // namespace

BENCHMARK_MAIN();
