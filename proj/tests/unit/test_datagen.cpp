#include <gtest/gtest.h>

#include <cmath>

#include "angof/datagen.hpp"
#include "angof/error.hpp"

using namespace angof;

namespace {
double empirical_cdf(const BivariateSample& s, double u, double v) {
  int c = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.x1[i] <= u && s.x2[i] <= v) ++c;
  return double(c) / s.size();
}

double kendall_tau(const BivariateSample& s) {
  const std::size_t n = s.size();
  long conc = 0, disc = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (s.x1[i] - s.x1[j]) * (s.x2[i] - s.x2[j]);
      if (d > 0) ++conc;
      else if (d < 0) ++disc;
    }
  return double(conc - disc) / double(conc + disc);
}
}  // namespace

TEST(CopulaTest, Validation) {
  EXPECT_THROW(validate_copula(CopulaSpec::gumbel(0.5)), DomainError);
  EXPECT_THROW(validate_copula(CopulaSpec::husler_reiss(0.0)), DomainError);
  EXPECT_THROW(validate_copula(CopulaSpec::max_linear(0.5, 0.4, 0.1, 0.9)), DomainError);
  EXPECT_THROW(validate_copula(CopulaSpec::max_linear(-0.1, 1.1, 0.1, 0.9)), DomainError);
  EXPECT_THROW(validate_copula(CopulaSpec::mixture(1.5, CopulaSpec::comonotone(), CopulaSpec::comonotone())),
               DomainError);
  EXPECT_NO_THROW(validate_copula(scenario(null_copula(Family::Logistic), 2, 0.3)));
  EXPECT_THROW(scenario(null_copula(Family::Logistic), 3, 0.3), ConfigError);
}

TEST(CopulaTest, CdfClosedForms) {
  const double u = 0.3, v = 0.7;
  const double g = std::exp(-std::pow(std::pow(-std::log(u), 2.0) + std::pow(-std::log(v), 2.0), 0.5));
  EXPECT_NEAR(copula_cdf(CopulaSpec::gumbel(2.0), u, v), g, 1e-14);
  EXPECT_NEAR(copula_cdf(CopulaSpec::comonotone(), u, v), u, 1e-15);
  EXPECT_NEAR(copula_cdf(CopulaSpec::gumbel(1.0), u, v), u * v, 1e-14);
  const double hr = copula_cdf(CopulaSpec::husler_reiss(1.0), 0.5, 0.5);
  EXPECT_NEAR(hr, std::pow(0.5, 2 * std_normal_cdf(1.0)), 1e-12);
  const auto mix = CopulaSpec::mixture(0.25, CopulaSpec::gumbel(2.0), CopulaSpec::comonotone());
  EXPECT_NEAR(copula_cdf(mix, u, v), 0.75 * g + 0.25 * u, 1e-14);
}

TEST(CopulaTest, ConditionalCdfIsPartialDerivative) {
  for (const auto& c : {CopulaSpec::gumbel(2.0), CopulaSpec::husler_reiss(1.0), CopulaSpec::husler_reiss(0.4)}) {
    for (double u : {0.2, 0.6, 0.9}) {
      for (double v : {0.3, 0.8}) {
        const double h = 1e-6;
        const double fd = (copula_cdf(c, u + h, v) - copula_cdf(c, u - h, v)) / (2 * h);
        EXPECT_NEAR(conditional_cdf(c, u, v), fd, 1e-7);
      }
    }
  }
  EXPECT_THROW(conditional_cdf(CopulaSpec::comonotone(), 0.5, 0.5), UnsupportedError);
}

class SamplerTest : public ::testing::TestWithParam<int> {};

TEST_P(SamplerTest, EmpiricalCdfMatchesCopula) {
  const CopulaSpec specs[] = {CopulaSpec::gumbel(2.0), CopulaSpec::husler_reiss(1.0), CopulaSpec::comonotone(),
                              CopulaSpec::max_linear(0.7, 0.3, 0.1, 0.9),
                              scenario(CopulaSpec::husler_reiss(1.0), 2, 0.5)};
  const CopulaSpec& c = specs[GetParam()];
  const int n = 20000;
  const BivariateSample s = sample(c, n, 1234);
  ASSERT_EQ(s.size(), static_cast<std::size_t>(n));
  for (double u : {0.2, 0.5, 0.9}) {
    for (double v : {0.3, 0.7, 0.95}) {
      const double C = copula_cdf(c, u, v);
      const double se = std::sqrt(C * (1 - C) / n);
      EXPECT_NEAR(empirical_cdf(s, u, v), C, 5 * se + 1e-4) << describe(c) << " " << u << " " << v;
    }
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    ASSERT_GT(s.x1[i], 0.0);
    ASSERT_LT(s.x1[i], 1.0);
  }
}

INSTANTIATE_TEST_SUITE_P(Kinds, SamplerTest, ::testing::Range(0, 5));

TEST(SamplerTest2, GumbelKendallTau) {
  const BivariateSample s = sample(CopulaSpec::gumbel(2.0), 3000, 5);
  EXPECT_NEAR(kendall_tau(s), 0.5, 0.03);
}

TEST(SamplerTest2, Determinism) {
  const auto c = scenario(null_copula(Family::HuslerReiss), 1, 0.4);
  const BivariateSample a = sample(c, 300, 9), b = sample(c, 500, 9);
  for (int i = 0; i < 300; ++i) {
    EXPECT_EQ(a.x1[i], b.x1[i]);
    EXPECT_EQ(a.x2[i], b.x2[i]);
  }
  EXPECT_NE(sample(c, 10, 10).x1, sample(c, 10, 9).x1);
  EXPECT_THROW(sample(c, 0, 1), DomainError);
}

TEST(SamplerTest2, ComonotoneIsDiagonal) {
  const BivariateSample s = sample(CopulaSpec::comonotone(), 100, 2);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(s.x1[i], s.x2[i]);
}
