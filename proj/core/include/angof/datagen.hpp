#pragma once

// Samplers for the copulas used in the simulation studies: Gumbel and
// Husler-Reiss extreme-value copulas, the comonotone copula, a bivariate
// max-linear factor copula and convex mixtures of these.

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "angof/empirical.hpp"
#include "angof/models.hpp"

namespace angof {

enum class CopulaKind { Gumbel, HuslerReiss, Comonotone, MaxLinear, Mixture };

struct CopulaSpec {
  CopulaKind kind = CopulaKind::Comonotone;
  double param = 0.0;                    // Gumbel theta >= 1, or HR r > 0
  std::array<double, 4> a{};             // max-linear a11, a12, a21, a22
  double lambda = 0.0;                   // mixture weight of `alt`
  std::shared_ptr<const CopulaSpec> base;
  std::shared_ptr<const CopulaSpec> alt;

  static CopulaSpec gumbel(double theta);
  static CopulaSpec husler_reiss(double r);
  static CopulaSpec comonotone();
  /// X1 = max(a11 Z1, a12 Z2), X2 = max(a21 Z1, a22 Z2), Z Frechet(1).
  static CopulaSpec max_linear(double a11, double a12, double a21, double a22);
  static CopulaSpec mixture(double lambda, const CopulaSpec& base, const CopulaSpec& alt);
};

void validate_copula(const CopulaSpec& c);
std::string describe(const CopulaSpec& c);

double copula_cdf(const CopulaSpec& c, double u, double v);

/// dC/du at (u, v); Gumbel, Husler-Reiss and mixtures of these only.
double conditional_cdf(const CopulaSpec& c, double u, double v);

/// n pairs with uniform margins. Observation i depends only on (seed, i).
BivariateSample sample(const CopulaSpec& c, int n, std::uint64_t seed);

/// The studies' null copula with alternative mixed in at weight lambda:
/// scenario 1 uses the comonotone copula, scenario 2 the max-linear factor
/// copula with coefficients (0.7, 0.3, 0.1, 0.9).
CopulaSpec scenario(const CopulaSpec& null, int scenario_id, double lambda);

/// Null copulas of the two model families: Gumbel(2) for logistic,
/// Husler-Reiss r = 1.
CopulaSpec null_copula(Family f);

}  // namespace angof
