#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "angof/datagen.hpp"
#include "angof/wasserstein.hpp"
#include "oracles.hpp"

using namespace angof;

namespace {
const PNorm P2 = PNorm::finite(2.0);

StepCDF random_step(std::mt19937_64& rng, int K) {
  std::uniform_real_distribution<double> u(0.0, kHalfPi);
  std::vector<double> loc(K), mass(K, 1.0 / K);
  for (auto& v : loc) v = u(rng);
  return StepCDF(loc, mass);
}
}  // namespace

TEST(DistanceTest, IdenticalSteps) {
  StepCDF F({kQuarterPi}, {1.0});
  StepCDF G({kQuarterPi}, {1.0});
  EXPECT_EQ(weighted_l1_distance(F, G, WeightKind::Constant), 0.0);
  EXPECT_EQ(weighted_l1_distance(F, G, WeightKind::InvSqrtQuarterPi), 0.0);
}

TEST(DistanceTest, OppositeUnitMasses) {
  StepCDF F({kHalfPi}, {1.0});
  StepCDF G({0.0}, {1.0});
  EXPECT_NEAR(weighted_l1_distance(F, G, WeightKind::Constant), kHalfPi, 1e-15);
  EXPECT_NEAR(weighted_l1_distance(F, G, WeightKind::InvSqrtQuarterPi), 4 * std::sqrt(kQuarterPi), 1e-13);
}

TEST(DistanceTest, UniformMassesAgainstLinearMatchesRiemann) {
  const double pi = std::numbers::pi;
  StepCDF F({pi / 8, pi / 4, 3 * pi / 8}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  auto G = [](double t) { return 2 * t / std::numbers::pi; };
  const double oracle = oracle::riemann([&](double t) { return std::abs(F(t) - G(t)); }, 0, kHalfPi, 1000000);
  EXPECT_NEAR(weighted_l1_distance(F, G, WeightKind::Constant), oracle, 1e-5);
  const double oq = oracle::riemann(
      [&](double t) { return std::abs(F(t) - G(t)) * weight_q(WeightKind::InvSqrtQuarterPi, t); }, 0, kHalfPi, 1000000);
  EXPECT_NEAR(weighted_l1_distance(F, G, WeightKind::InvSqrtQuarterPi), oq, 2e-3);
}

TEST(DistanceTest, StepVersusStepMatchesRiemann) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const StepCDF F = random_step(rng, 7), G = random_step(rng, 4);
    const double o = oracle::riemann([&](double x) { return std::abs(F(x) - G(x)); }, 0, kHalfPi, 400000);
    EXPECT_NEAR(weighted_l1_distance(F, G, WeightKind::Constant), o, 1e-4);
  }
}

TEST(DistanceTest, TriangleInequality) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const StepCDF F = random_step(rng, 5), G = random_step(rng, 9), H = random_step(rng, 3);
    for (WeightKind q : {WeightKind::Constant, WeightKind::InvSqrtQuarterPi}) {
      EXPECT_LE(weighted_l1_distance(F, H, q), weighted_l1_distance(F, G, q) + weighted_l1_distance(G, H, q) + 1e-12);
    }
  }
}

TEST(DistanceTest, SingularWeightBound) {
  std::mt19937_64 rng(9);
  AngularModel m({Family::Logistic, 0.4}, P2);
  auto G = [&](double t) { return m.normalized_cdf(t); };
  for (int t = 0; t < 20; ++t) {
    const StepCDF F = random_step(rng, 12);
    EXPECT_LE(weighted_l1_distance(F, G, WeightKind::InvSqrtQuarterPi), 4 * std::sqrt(kQuarterPi) + 1e-9);
  }
}

TEST(DistanceTest, SmoothModelAgainstRiemann) {
  AngularModel m({Family::HuslerReiss, 1.0}, P2);
  auto G = [&](double t) { return m.normalized_cdf(t); };
  std::mt19937_64 rng(12);
  const StepCDF F = random_step(rng, 15);
  int cells = 0;
  const double d = weighted_l1_distance(F, G, WeightKind::Constant, &cells);
  EXPECT_GT(cells, 15);
  const double o = oracle::riemann([&](double x) { return std::abs(F(x) - G(x)); }, 0, kHalfPi, 400000);
  EXPECT_NEAR(d, o, 1e-6);
}

TEST(StatisticTest, ScalesWithSqrtK) {
  const BivariateSample s = sample(CopulaSpec::gumbel(2.0), 2500, 3);
  const AngularDataset d = angular_dataset(s, 25, P2);
  AngularModel m({Family::Logistic, 0.5}, P2);
  const TestStatistic t = test_statistic(d, m, WeightKind::InvSqrtQuarterPi);
  const double dist = weighted_l1_distance(empirical_angular_cdf(d), [&](double x) { return m.normalized_cdf(x); },
                                           WeightKind::InvSqrtQuarterPi);
  EXPECT_NEAR(t.value, 5.0 * dist, 1e-12);
  EXPECT_EQ(t.k, 25);
  EXPECT_GE(t.value, 0.0);
}
