#pragma once

// L_p geometry of the bivariate exceedance region and the moment-constraint
// function shared by the estimators and the limit-law simulator.

#include <limits>
#include <numbers>
#include <string>

namespace angof {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

/// Exponent of an L_p norm, p in [1, inf]. Infinity is a tag, not a large
/// float, so every branch point is handled exactly.
class PNorm {
 public:
  /// Throws DomainError unless 1 <= p < inf.
  static PNorm finite(double p);
  static constexpr PNorm infinity() noexcept { return PNorm(kInf); }
  /// Accepts "inf"/"infinity" or a decimal number >= 1.
  static PNorm parse(const std::string& text);

  constexpr bool is_infinite() const noexcept { return p_ == kInf; }
  constexpr double value() const noexcept { return p_; }
  std::string to_string() const;

  friend constexpr bool operator==(PNorm a, PNorm b) noexcept { return a.p_ == b.p_; }

 private:
  explicit constexpr PNorm(double p) noexcept : p_(p) {}
  double p_;
};

/// ||(x1, x2)||_p for nonnegative components, computed with the larger
/// component factored out. Infinite components are allowed.
double lp_norm(PNorm p, double x1, double x2) noexcept;

/// Smallest y >= 1 with ||(1/x, 1/y)||_p = 1; +inf on [0, 1).
double y_p(PNorm p, double x) noexcept;

/// |y_p'(x)| = (x^p - 1)^{-(1 + 1/p)} for 1 < x < inf and finite p.
double y_p_prime_abs(PNorm p, double x);

/// Abscissa where the ray y = x tan(theta) meets the curve y = y_p(x).
double x_p_of_theta(PNorm p, double theta);

/// Membership of (x, y) in C_{p,theta}; x and y may be +inf.
bool in_C_p_theta(PNorm p, double theta, double x, double y) noexcept;

/// f(theta) = (sin - cos) / ||(sin, cos)||_p, always in [-1, 1].
double constraint_f(PNorm p, double theta) noexcept;

/// f'(theta) = (sin^{p-1} + cos^{p-1}) / ||(sin, cos)||_p^{1+p}; finite p only.
double constraint_f_prime(PNorm p, double theta);

enum class WeightKind { Constant, InvSqrtQuarterPi };

WeightKind parse_weight_kind(const std::string& text);
std::string to_string(WeightKind q);

/// Pointwise weight. The singular kind is never evaluated at pi/4 by the
/// integrators; calling it there throws DomainError.
double weight_q(WeightKind q, double theta);

/// Exact integral of the weight over [a, b] within [0, pi/2].
double weight_integral(WeightKind q, double a, double b);

}  // namespace angof
