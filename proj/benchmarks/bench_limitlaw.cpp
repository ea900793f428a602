#include <benchmark/benchmark.h>

#include "angof/limitlaw.hpp"

namespace {

using namespace angof;

void BM_PlanDesk(benchmark::State& state) {
  for (auto _ : state) {
    LimitLawPlan plan({Family::Logistic, 0.5}, PNorm::finite(2.0), desk_grid(), WeightKind::InvSqrtQuarterPi, 1);
    benchmark::DoNotOptimize(plan.thetas().data());
  }
}
BENCHMARK(BM_PlanDesk)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_DrawDesk(benchmark::State& state) {
  const LimitLawPlan plan({Family::Logistic, 0.5}, PNorm::finite(2.0), desk_grid(), WeightKind::InvSqrtQuarterPi, 1);
  std::uint64_t b = 0;
  for (auto _ : state) benchmark::DoNotOptimize(plan.draw(plan.field(42, b++)));
}
BENCHMARK(BM_DrawDesk)->Unit(benchmark::kMillisecond);

void BM_FieldDesk(benchmark::State& state) {
  const FieldGrid g = desk_grid();
  const std::vector<double> masses = cell_masses({Family::HuslerReiss, 1.0}, g);
  std::uint64_t b = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_field(masses, g, 42, b++).values().data());
}
BENCHMARK(BM_FieldDesk)->Unit(benchmark::kMillisecond);

}  // namespace
