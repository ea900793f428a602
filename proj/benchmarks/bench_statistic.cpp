#include <benchmark/benchmark.h>

#include "angof/datagen.hpp"
#include "angof/experiments.hpp"
#include "angof/wasserstein.hpp"

namespace {

using namespace angof;

void BM_EuclideanWeights(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  std::vector<double> angles(K);
  for (int j = 0; j < K; ++j) angles[j] = kHalfPi * (j + 0.5) / K;
  for (auto _ : state) benchmark::DoNotOptimize(euclidean_weights(angles, PNorm::finite(2.0)));
}
BENCHMARK(BM_EuclideanWeights)->Arg(50)->Arg(200)->Arg(1000);

void BM_AngularModel(benchmark::State& state) {
  const ModelParams m{state.range(0) == 0 ? Family::Logistic : Family::HuslerReiss, state.range(0) == 0 ? 0.5 : 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(AngularModel(m, PNorm::finite(2.0)).total_mass());
}
BENCHMARK(BM_AngularModel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TestStatistic(benchmark::State& state) {
  const BivariateSample s = sample(CopulaSpec::gumbel(2.0), 3000, 7);
  const AngularDataset d = angular_dataset(s, 50, PNorm::finite(2.0));
  const AngularModel model({Family::Logistic, 0.5}, PNorm::finite(2.0));
  for (auto _ : state) benchmark::DoNotOptimize(test_statistic(d, model, WeightKind::InvSqrtQuarterPi).value);
}
BENCHMARK(BM_TestStatistic)->Unit(benchmark::kMicrosecond);

void BM_SampleGumbel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sample(CopulaSpec::gumbel(2.0), 3000, 11).x1.data());
}
BENCHMARK(BM_SampleGumbel)->Unit(benchmark::kMillisecond);

}  // namespace
