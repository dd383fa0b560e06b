#include <benchmark/benchmark.h>

#include "gpnet/experiments.hpp"
#include "gpnet/gaussian.hpp"
#include "gpnet/models.hpp"

namespace {

using namespace gpnet;

void BM_BuildJointCov_CommonScaleMatern(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const ParsimoniousMaternModel demo = demo_network_model();
  const LocationSet locs = LocationSet::grid2d(m);
  for (auto _ : state) {
    Matrix C = build_joint_cov(CrossCovModel{demo}, locs);
    benchmark::DoNotOptimize(C.data());
  }
  state.SetComplexityN(5L * m * m);
}
BENCHMARK(BM_BuildJointCov_CommonScaleMatern)->Arg(10)->Arg(20)->Complexity();

void BM_BuildJointCov_InsideOut(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const LocationSet S = LocationSet::grid2d(m);
  std::vector<MaternParams> corr{{0.5, 10.0}, {1.0, 12.0}, {1.5, 8.0}};
  const InsideOutModel iox(SigmaPair::from_sigma(Matrix::Identity(3, 3)), corr, S);
  for (auto _ : state) {
    Matrix C = build_joint_cov(CrossCovModel{iox}, S);
    benchmark::DoNotOptimize(C.data());
  }
}
BENCHMARK(BM_BuildJointCov_InsideOut)->Arg(10)->Arg(16);

void BM_CholeskyFactor(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ParsimoniousMaternModel demo = demo_network_model();
  const LocationSet locs = LocationSet::grid2d(n);
  const Matrix C = build_joint_cov(CrossCovModel{demo}, locs);
  for (auto _ : state) {
    Matrix L = C;
    chol_inplace(L);
    benchmark::DoNotOptimize(L.data());
  }
}
BENCHMARK(BM_CholeskyFactor)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
