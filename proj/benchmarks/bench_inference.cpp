#include <benchmark/benchmark.h>

#include "gpnet/experiments.hpp"
#include "gpnet/inference.hpp"
#include "gpnet/rng.hpp"

namespace {

using namespace gpnet;

Matrix bench_spd(int q, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) a(i, j) = rng.normal();
  Matrix s = a * a.transpose() / q;
  s.diagonal().array() += 0.5;
  return s;
}

void BM_GraphicalLasso(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  const Matrix s = bench_spd(q, 7);
  for (auto _ : state) {
    GraphEstimate est = graphical_lasso(s, 0.1);
    benchmark::DoNotOptimize(est.precision.data());
  }
}
BENCHMARK(BM_GraphicalLasso)->Arg(5)->Arg(10);

void BM_GlassoEntryLambdaPath(benchmark::State& state) {
  const Matrix s = bench_spd(8, 11);
  for (auto _ : state) {
    Matrix scores = glasso_entry_lambda_scores(s);
    benchmark::DoNotOptimize(scores.data());
  }
}
BENCHMARK(BM_GlassoEntryLambdaPath)->Unit(benchmark::kMillisecond);

void BM_SigmaMle(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const ParsimoniousMaternModel demo = demo_network_model();
  const LocationSet locs = LocationSet::grid2d(m);
  const FieldSample sample = sample_field(CrossCovModel{demo}, locs, 1234);
  for (auto _ : state) {
    FitResult fit = fit_sigma_mle(sample, CrossCovModel{demo});
    benchmark::DoNotOptimize(fit.loglik_at_opt);
  }
}
BENCHMARK(BM_SigmaMle)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace
