#pragma once

// Parametric families of bivariate extremal dependence (logistic and
// Husler-Reiss): stable tail dependence function, exponent density, the
// angular measure on the L_p sphere and the extremal-coefficient estimator.

#include <array>
#include <string>
#include <vector>

#include "angof/geometry.hpp"

namespace angof {

enum class Family { Logistic, HuslerReiss };

Family parse_family(const std::string& text);
std::string to_string(Family f);

struct ModelParams {
  Family family = Family::Logistic;
  double r = 0.5;
};

/// Throws DomainError unless r lies in the family's parameter set
/// (logistic (0, 1], Husler-Reiss (0, inf)).
void validate_params(const ModelParams& m);

/// Range used when clamping estimates and finite-difference steps.
struct ParamRange {
  double lo;
  double hi;
};
ParamRange estimation_range(Family f) noexcept;

double std_normal_cdf(double z) noexcept;
double std_normal_pdf(double z) noexcept;

/// l_r(x, y).
double stdf(const ModelParams& m, double x, double y);

/// (dl/dx, dl/dy); right-hand derivatives on the axes.
std::array<double, 2> stdf_partials(const ModelParams& m, double x, double y);

/// (1 - dl/dx, 1 - dl/dy) without cancellation. 1 - dl/dx(x, y) equals the
/// Lambda-mass of the vertical segment {x} x [0, y] per unit width.
std::array<double, 2> stdf_copartials(const ModelParams& m, double x, double y);

/// lambda_r(x, y) = -d^2 l / dx dy, homogeneous of degree -1.
double exponent_density(const ModelParams& m, double x, double y);

/// Lambda([0, a] x [0, b]) = a + b - l(a, b), clamped at 0.
double rect_mass(const ModelParams& m, double a, double b);

/// l(1, 1) as a function of r.
double extremal_coefficient(const ModelParams& m);

struct ParamEstimate {
  ModelParams params;
  bool clamped = false;
};

/// Inverts the extremal coefficient: r = log2(l) (logistic) or
/// r = Phi^{-1}(l / 2) (Husler-Reiss), clamped into estimation_range.
ParamEstimate estimate_param(Family family, double ell_hat_11);

/// Constants of the linear expansion of the estimator: sqrt(k)(r_hat - r) is
/// asymptotically g * sqrt(k)(l_hat(1, 1) - l(1, 1)); sigma is the Dirac
/// mass at (sigma_x, sigma_y).
struct ExpansionConstants {
  double g;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
};
ExpansionConstants expansion_constants(const ModelParams& m);

/// Exact Phi_{p,r}(theta) = Lambda(C_{p,theta}) from one-dimensional
/// integrals of the stdf partial derivatives.
double angular_cdf_exact(const ModelParams& m, PNorm p, double theta);

/// Angular measure of one parametric model on the L_p sphere. Immutable
/// after construction; the interpolation cache is built eagerly.
class AngularModel {
 public:
  static constexpr int kCacheNodes = 2048;

  AngularModel(const ModelParams& m, PNorm p);

  const ModelParams& params() const noexcept { return params_; }
  PNorm p() const noexcept { return p_; }

  /// phi_{p,r}(theta) on the open interval (0, pi/2).
  double angular_density(double theta) const;

  /// Phi_{p,r}(theta), evaluated exactly (no interpolation).
  double angular_cdf(double theta) const;

  double total_mass() const noexcept { return total_mass_; }

  /// Q_{p,r}(theta) from the cached monotone interpolant.
  double normalized_cdf(double theta) const noexcept;

  /// Gradient of Q_{p,r}(theta) in r (central finite differences; see
  /// grad_normalized_cdf_grid).
  std::vector<double> grad_normalized_cdf(double theta, bool* clamped = nullptr) const;

  const std::vector<double>& cache_nodes() const noexcept { return nodes_; }

 private:
  ModelParams params_;
  PNorm p_;
  double total_mass_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> values_;  // Q at nodes
  std::vector<double> slopes_;  // dQ/dtheta at nodes, monotonicity-limited
};

/// d/dr Q_{p,r}(theta_i) for every theta_i, by central differences with step
/// 1e-4 max(1, |r|) kept inside estimation_range. Sets *clamped when a
/// one-sided step had to be shortened.
std::vector<double> grad_normalized_cdf_grid(const ModelParams& m, PNorm p, const std::vector<double>& thetas,
                                             bool* clamped = nullptr);

}  // namespace angof
