#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "angof/error.hpp"
#include "angof/models.hpp"
#include "angof/quadrature.hpp"

using namespace angof;

namespace {
const PNorm P1 = PNorm::finite(1.0);
const PNorm P2 = PNorm::finite(2.0);
ModelParams lg(double r) { return {Family::Logistic, r}; }
ModelParams hr(double r) { return {Family::HuslerReiss, r}; }
const double kSqrt2 = std::numbers::sqrt2;

// Closed-form logistic exponent density.
double logistic_lambda(double r, double x, double y) {
  const double a = 1.0 / r;
  return (a - 1.0) * std::pow(x * y, a - 1.0) * std::pow(std::pow(x, a) + std::pow(y, a), r - 2.0);
}
}  // namespace

TEST(ModelsTest, ParamValidation) {
  EXPECT_THROW(validate_params(lg(0.0)), DomainError);
  EXPECT_THROW(validate_params(lg(1.2)), DomainError);
  EXPECT_NO_THROW(validate_params(lg(1.0)));
  EXPECT_THROW(validate_params(hr(-1.0)), DomainError);
  EXPECT_EQ(parse_family("logistic"), Family::Logistic);
  EXPECT_EQ(parse_family("hr"), Family::HuslerReiss);
}

TEST(StdfTest, Examples) {
  EXPECT_NEAR(stdf(lg(0.5), 1, 1), kSqrt2, 1e-14);
  EXPECT_NEAR(stdf(lg(1.0), 0.3, 0.9), 1.2, 1e-14);
  EXPECT_NEAR(stdf(hr(1.0), 1, 1), 2.0 * std_normal_cdf(1.0), 1e-14);
  EXPECT_NEAR(2.0 * std_normal_cdf(1.0), 1.682689, 1e-6);
}

TEST(StdfTest, BoundsHomogeneityExchangeability) {
  for (const auto& m : {lg(0.3), lg(0.7), hr(0.5), hr(2.0)}) {
    EXPECT_NEAR(stdf(m, 2.5, 0.0), 2.5, 1e-12);
    EXPECT_NEAR(stdf(m, 0.0, 1.5), 1.5, 1e-12);
    for (double x : {0.2, 1.0, 3.0}) {
      for (double y : {0.1, 0.9, 4.0}) {
        const double l = stdf(m, x, y);
        EXPECT_GE(l, std::max(x, y) - 1e-12);
        EXPECT_LE(l, x + y + 1e-12);
        EXPECT_NEAR(stdf(m, y, x), l, 1e-12);
        EXPECT_NEAR(stdf(m, 3 * x, 3 * y), 3 * l, 1e-11);
      }
    }
  }
}

TEST(ExponentDensityTest, Examples) {
  EXPECT_NEAR(exponent_density(lg(0.5), 1, 1), std::pow(2.0, -1.5), 1e-12);
  EXPECT_NEAR(exponent_density(lg(0.5), 2, 4), 0.5 * exponent_density(lg(0.5), 1, 2), 1e-14);
  EXPECT_NEAR(exponent_density(hr(1.0), 1, 1), 0.5 * std_normal_pdf(1.0), 1e-12);
}

TEST(ExponentDensityTest, MatchesMixedFiniteDifference) {
  for (const auto& m : {lg(0.4), hr(1.0), hr(0.7)}) {
    for (double x : {0.5, 1.0, 2.0}) {
      for (double y : {0.7, 1.3}) {
        const double h = 1e-4;
        const double fd =
            -(stdf(m, x + h, y + h) - stdf(m, x + h, y - h) - stdf(m, x - h, y + h) + stdf(m, x - h, y - h)) / (4 * h * h);
        EXPECT_NEAR(exponent_density(m, x, y), fd, 1e-5);
      }
    }
    for (double x : {0.4, 1.7}) EXPECT_NEAR(exponent_density(lg(0.4), x, 0.9), logistic_lambda(0.4, x, 0.9), 1e-12);
  }
}

TEST(StdfPartialsTest, Examples) {
  auto a = stdf_partials(lg(0.5), 1, 1);
  EXPECT_NEAR(a[0], 1 / kSqrt2, 1e-12);
  EXPECT_NEAR(a[1], 1 / kSqrt2, 1e-12);
  auto b = stdf_partials(hr(1.0), 1, 1);
  EXPECT_NEAR(b[0], std_normal_cdf(1.0), 1e-12);
  EXPECT_NEAR(b[1], std_normal_cdf(1.0), 1e-12);
  auto c = stdf_partials(lg(1.0), 0.3, 2.0);
  EXPECT_NEAR(c[0], 1.0, 1e-14);
  EXPECT_NEAR(c[1], 1.0, 1e-14);
}

TEST(StdfPartialsTest, MatchFiniteDifferences) {
  for (const auto& m : {lg(0.3), lg(0.8), hr(0.5), hr(2.0)}) {
    for (double x : {0.3, 1.0, 2.5}) {
      for (double y : {0.4, 1.6}) {
        const double h = 1e-6;
        const auto d = stdf_partials(m, x, y);
        EXPECT_NEAR(d[0], (stdf(m, x + h, y) - stdf(m, x - h, y)) / (2 * h), 1e-6);
        EXPECT_NEAR(d[1], (stdf(m, x, y + h) - stdf(m, x, y - h)) / (2 * h), 1e-6);
        const auto c = stdf_copartials(m, x, y);
        EXPECT_NEAR(c[0], 1 - d[0], 1e-12);
        EXPECT_NEAR(c[1], 1 - d[1], 1e-12);
      }
    }
  }
}

TEST(RectMassTest, Examples) {
  EXPECT_NEAR(rect_mass(lg(1.0), 2.0, 3.0), 0.0, 1e-14);
  EXPECT_EQ(rect_mass(hr(1.0), 2.0, 0.0), 0.0);
  EXPECT_NEAR(rect_mass(lg(0.5), 1, 1), 2 - kSqrt2, 1e-14);
}

TEST(EstimateParamTest, Examples) {
  EXPECT_NEAR(estimate_param(Family::Logistic, kSqrt2).params.r, 0.5, 1e-15);
  EXPECT_NEAR(estimate_param(Family::HuslerReiss, 2 * std_normal_cdf(1.0)).params.r, 1.0, 1e-12);
  EXPECT_NEAR(estimate_param(Family::Logistic, 1.5).params.r, std::log2(1.5), 1e-15);
  EXPECT_TRUE(estimate_param(Family::Logistic, 0.9).clamped);
  EXPECT_TRUE(estimate_param(Family::HuslerReiss, 2.1).clamped);
}

TEST(EstimateParamTest, RoundTrip) {
  for (double r = 0.05; r <= 1.0; r += 0.05)
    EXPECT_NEAR(estimate_param(Family::Logistic, extremal_coefficient(lg(r))).params.r, r, 1e-12);
  // Inverting chi loses accuracy as chi flattens out; allow a few ulps of
  // chi scaled by dr/dchi.
  for (double r = 0.1; r <= 5.0; r += 0.1) {
    const double tol = std::max(1e-12, 8 * 2.2e-16 * 2 * expansion_constants(hr(r)).g);
    EXPECT_NEAR(estimate_param(Family::HuslerReiss, extremal_coefficient(hr(r))).params.r, r, tol);
  }
}

TEST(ExpansionTest, Examples) {
  EXPECT_NEAR(expansion_constants(lg(0.5)).g, 1.0 / (kSqrt2 * std::log(2.0)), 1e-12);
  EXPECT_NEAR(expansion_constants(lg(0.5)).g, 1.020139, 1e-6);
  EXPECT_NEAR(expansion_constants(lg(1.0)).g, 0.721348, 1e-6);
  EXPECT_NEAR(expansion_constants(hr(1.0)).g, 2.066366, 1e-6);
}

TEST(ExpansionTest, GIsInverseDerivativeOfChi) {
  for (const auto& m : {lg(0.3), lg(0.7), hr(0.6), hr(1.5)}) {
    const double h = 1e-6;
    const double dchi =
        (extremal_coefficient({m.family, m.r + h}) - extremal_coefficient({m.family, m.r - h})) / (2 * h);
    EXPECT_NEAR(expansion_constants(m).g, 1.0 / dchi, 1e-6);
  }
}

TEST(AngularModelTest, DensityExamples) {
  AngularModel a(lg(0.5), P2);
  EXPECT_NEAR(a.angular_density(kQuarterPi), 1.0, 1e-12);
  EXPECT_NEAR(a.angular_density(kQuarterPi), 2 * kSqrt2 * logistic_lambda(0.5, 1, 1), 1e-12);
  AngularModel b(lg(0.5), P1);
  // p = 1 at pi/4: ||(c, s)||_1 / (c s) lambda(c, s) with c = s = sqrt(2)/2.
  const double c = kSqrt2 / 2;
  EXPECT_NEAR(b.angular_density(kQuarterPi), (2 * c) / (c * c) * logistic_lambda(0.5, c, c), 1e-12);
}

TEST(AngularModelTest, DensityIsDerivativeOfCdf) {
  for (const auto& m : {lg(0.5), hr(1.0)}) {
    AngularModel a(m, P2);
    for (double th : {0.3, 0.7, 1.2}) {
      const double h = 1e-5;
      const double fd = (angular_cdf_exact(m, P2, th + h) - angular_cdf_exact(m, P2, th - h)) / (2 * h);
      EXPECT_NEAR(a.angular_density(th), fd, 1e-5);
    }
  }
}

TEST(AngularModelTest, CdfExamples) {
  AngularModel a(lg(0.5), P2);
  EXPECT_EQ(a.angular_cdf(0.0), 0.0);
  const double tot = a.angular_cdf(kHalfPi);
  EXPECT_GE(tot, 1.0);
  EXPECT_LE(tot, 2.0);
  EXPECT_NEAR(a.angular_cdf(kQuarterPi), tot / 2, 1e-6);
  EXPECT_NEAR(a.total_mass(), tot, 1e-8);
  EXPECT_NEAR(a.normalized_cdf(kHalfPi), 1.0, 1e-12);
  EXPECT_NEAR(a.normalized_cdf(kQuarterPi), 0.5, 1e-7);
  AngularModel b(hr(1.0), P2);
  EXPECT_NEAR(b.normalized_cdf(kQuarterPi), 0.5, 1e-7);
}

// Both marginal identities: int sin/||.|| dPhi = int cos/||.|| dPhi = 1.
// Angles just below pi/2 cannot be represented finely enough to integrate a
// density that blows up there, so the upper half is folded onto [0, pi/4]
// by exchangeability (checked separately), which makes both integrals equal
// to int_0^{pi/4} (sin + cos)/||.|| dPhi.
class MarginTest : public ::testing::TestWithParam<std::tuple<int, double, double>> {};

TEST_P(MarginTest, MarginalConstraints) {
  const auto [fam, r, p] = GetParam();
  const ModelParams m{fam == 0 ? Family::Logistic : Family::HuslerReiss, r};
  const PNorm pn = PNorm::finite(p);
  AngularModel a(m, pn);
  const double I = integrate_tanh_sinh(
      [&](double t) {
        const double s = std::sin(t), c = std::cos(t);
        return (s + c) / lp_norm(pn, s, c) * a.angular_density(t);
      },
      0, kQuarterPi, 1e-10);
  EXPECT_NEAR(I, 1.0, 1e-5);
  for (double th : {0.05, 0.3, 0.6}) {
    EXPECT_NEAR(a.angular_density(th), a.angular_density(kHalfPi - th), 1e-9 * a.angular_density(th));
  }
  EXPECT_GE(a.total_mass(), 1.0 - 1e-9);
  EXPECT_LE(a.total_mass(), 2.0 + 1e-9);
  for (double th : {0.1, 0.4, 0.7}) EXPECT_NEAR(a.normalized_cdf(th) + a.normalized_cdf(kHalfPi - th), 1.0, 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Families, MarginTest,
                         ::testing::Combine(::testing::Values(0), ::testing::Values(0.3, 0.5, 0.8),
                                            ::testing::Values(1.0, 2.0)));
INSTANTIATE_TEST_SUITE_P(HR, MarginTest,
                         ::testing::Combine(::testing::Values(1), ::testing::Values(0.5, 1.0, 2.0),
                                            ::testing::Values(1.0, 2.0)));

TEST(AngularModelTest, NormalizedCdfMatchesExact) {
  for (const auto& m : {lg(0.5), hr(1.0), lg(0.85)}) {
    AngularModel a(m, P2);
    for (double th = 0.05; th < kHalfPi; th += 0.11) {
      EXPECT_NEAR(a.normalized_cdf(th), angular_cdf_exact(m, P2, th) / a.total_mass(), 1e-7);
    }
  }
}

TEST(GradientTest, Examples) {
  AngularModel a(lg(0.5), P2);
  EXPECT_NEAR(a.grad_normalized_cdf(0.0)[0], 0.0, 1e-9);
  EXPECT_NEAR(a.grad_normalized_cdf(kHalfPi)[0], 0.0, 1e-9);
  EXPECT_NEAR(a.grad_normalized_cdf(kQuarterPi)[0], 0.0, 1e-5);
  // Five-point stencil on independent exact evaluations.
  const double th = std::numbers::pi / 8, h = 1e-3;
  auto Q = [&](double r) { return angular_cdf_exact(lg(r), P2, th) / angular_cdf_exact(lg(r), P2, kHalfPi); };
  const double stencil = (-Q(0.5 + 2 * h) + 8 * Q(0.5 + h) - 8 * Q(0.5 - h) + Q(0.5 - 2 * h)) / (12 * h);
  EXPECT_NEAR(a.grad_normalized_cdf(th)[0], stencil, 1e-4);
}

TEST(GradientTest, ClampsNearBoundary) {
  bool clamped = false;
  grad_normalized_cdf_grid(lg(estimation_range(Family::Logistic).hi - 1e-5), P2, {0.5}, &clamped);
  EXPECT_TRUE(clamped);
  clamped = false;
  grad_normalized_cdf_grid(lg(0.5), P2, {0.5}, &clamped);
  EXPECT_FALSE(clamped);
}
