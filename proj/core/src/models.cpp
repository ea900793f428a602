#include "angof/models.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "angof/error.hpp"
#include "angof/quadrature.hpp"

namespace angof {

Family parse_family(const std::string& text) {
  if (text == "logistic") return Family::Logistic;
  if (text == "hr" || text == "husler-reiss" || text == "huslerreiss") return Family::HuslerReiss;
  throw ConfigError("unknown model family '" + text + "' (expected logistic or hr)");
}

std::string to_string(Family f) { return f == Family::Logistic ? "logistic" : "hr"; }

void validate_params(const ModelParams& m) {
  const bool ok = m.family == Family::Logistic ? (m.r > 0.0 && m.r <= 1.0) : (m.r > 0.0 && std::isfinite(m.r));
  if (!ok) {
    std::ostringstream os;
    os << to_string(m.family) << " parameter out of range: r = " << m.r;
    throw DomainError(os.str());
  }
}

ParamRange estimation_range(Family f) noexcept {
  if (f == Family::Logistic) return {1e-3, 1.0 - 1e-9};
  return {1e-3, 8.0};
}

double std_normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

// log(x^{1/r} + y^{1/r}) for x, y > 0.
double log_power_sum(double x, double y, double inv_r) {
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  return inv_r * std::log(hi) + std::log1p(std::pow(lo / hi, inv_r));
}

// Argument of the normal CDF in the HR partial dl/dx.
double hr_arg(double r, double x, double y) { return r + std::log(x / y) / (2.0 * r); }

}  // namespace

double stdf(const ModelParams& m, double x, double y) {
  validate_params(m);
  if (x < 0.0 || y < 0.0) throw DomainError("stdf requires nonnegative arguments");
  if (x == 0.0) return y;
  if (y == 0.0) return x;
  if (m.family == Family::Logistic) {
    const double hi = std::max(x, y);
    const double lo = std::min(x, y);
    return hi * std::pow(1.0 + std::pow(lo / hi, 1.0 / m.r), m.r);
  }
  return x * std_normal_cdf(hr_arg(m.r, x, y)) + y * std_normal_cdf(hr_arg(m.r, y, x));
}

std::array<double, 2> stdf_copartials(const ModelParams& m, double x, double y) {
  validate_params(m);
  if (x < 0.0 || y < 0.0 || (x == 0.0 && y == 0.0)) throw DomainError("stdf partials need (x, y) != 0, >= 0");
  auto co = [&](double u, double v) -> double {
    // 1 - dl/du at (u, v).
    if (v == 0.0) return 0.0;
    if (u == 0.0) return 1.0;
    if (m.family == Family::Logistic) {
      if (m.r == 1.0) return 0.0;
      // dl/du = (1 + (v/u)^{1/r})^{r-1}
      const double w = std::pow(v / u, 1.0 / m.r);
      if (!std::isfinite(w)) return 1.0;
      return -std::expm1((m.r - 1.0) * std::log1p(w));
    }
    return std_normal_cdf(-hr_arg(m.r, u, v));
  };
  return {co(x, y), co(y, x)};
}

std::array<double, 2> stdf_partials(const ModelParams& m, double x, double y) {
  const auto co = stdf_copartials(m, x, y);
  return {1.0 - co[0], 1.0 - co[1]};
}

double exponent_density(const ModelParams& m, double x, double y) {
  validate_params(m);
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("exponent density requires x > 0 and y > 0");
  if (!std::isfinite(x) || !std::isfinite(y)) return 0.0;
  if (m.family == Family::Logistic) {
    if (m.r == 1.0) return 0.0;
    const double inv_r = 1.0 / m.r;
    const double log_val = std::log(inv_r - 1.0) + (inv_r - 1.0) * (std::log(x) + std::log(y)) -
                           (2.0 - m.r) * log_power_sum(x, y, inv_r);
    return std::exp(log_val);
  }
  // The two-term display collapses to a single term because
  // x phi(a(x, y)) = y phi(a(y, x)).
  return std_normal_pdf(hr_arg(m.r, x, y)) / (2.0 * m.r * y);
}

double rect_mass(const ModelParams& m, double a, double b) {
  if (a < 0.0 || b < 0.0) throw DomainError("rect_mass requires nonnegative corners");
  const double v = a + b - stdf(m, a, b);
  if (v < -1e-12 * std::max(1.0, a + b)) {
    std::ostringstream os;
    os << "negative rectangle mass " << v << " at (" << a << ", " << b << ")";
    throw NumericalError(os.str());
  }
  return std::max(0.0, v);
}

double extremal_coefficient(const ModelParams& m) {
  validate_params(m);
  return m.family == Family::Logistic ? std::exp2(m.r) : 2.0 * std_normal_cdf(m.r);
}

ParamEstimate estimate_param(Family family, double ell_hat_11) {
  if (!std::isfinite(ell_hat_11)) throw DomainError("extremal coefficient estimate is not finite");
  const ParamRange range = estimation_range(family);
  double r;
  bool clamped = false;
  if (ell_hat_11 <= 1.0) {
    r = range.lo;
    clamped = true;
  } else if (ell_hat_11 >= 2.0) {
    r = range.hi;
    clamped = true;
  } else if (family == Family::Logistic) {
    r = std::log2(ell_hat_11);
  } else {
    r = boost::math::quantile(boost::math::normal_distribution<double>(), ell_hat_11 / 2.0);
  }
  if (r < range.lo) {
    r = range.lo;
    clamped = true;
  } else if (r > range.hi) {
    r = range.hi;
    clamped = true;
  }
  return {{family, r}, clamped};
}

ExpansionConstants expansion_constants(const ModelParams& m) {
  validate_params(m);
  if (m.family == Family::Logistic) return {1.0 / (std::exp2(m.r) * std::numbers::ln2)};
  return {1.0 / (2.0 * std_normal_pdf(m.r))};
}

namespace {

void require_angular(const ModelParams& m) {
  validate_params(m);
  if (m.family == Family::Logistic && m.r >= 1.0) {
    throw DomainError("logistic r = 1 has an atomic angular measure; angular functions need r < 1");
  }
}

}  // namespace

double angular_cdf_exact(const ModelParams& m, PNorm p, double theta) {
  require_angular(m);
  if (theta < 0.0 || theta > kHalfPi) throw DomainError("theta must lie in [0, pi/2]");
  if (theta == 0.0) return 0.0;
  const bool top = theta == kHalfPi;
  const double s = std::sin(theta);
  const double c = top ? 0.0 : std::cos(theta);
  const double t = top ? kInf : s / c;
  const double xp = lp_norm(p, 1.0, c / s);
  const double upper = top ? kInf : xp * t;

  // Vertical strips x <= x_p under the ray: degree-0 homogeneity of dl/dx.
  const double ray = xp * stdf_copartials(m, 1.0, t)[0];

  // Horizontal strips y <= x_p tan(theta) to the right of x_p, bounded by
  // x <= y_p(y): integrand l_2(x_p, y) - l_2(y_p(y), y), with l_2(inf, y) = 0.
  auto below_one = [&](double y) { return y <= 0.0 ? 0.0 : 1.0 - stdf_copartials(m, xp, y)[1]; };
  auto above_one = [&](double y) {
    const double right = y_p(p, y);
    const double co_right = right == kInf ? 1.0 : stdf_copartials(m, right, y)[1];
    return co_right - stdf_copartials(m, xp, y)[1];
  };
  double curve = integrate_tanh_sinh(below_one, 0.0, std::min(1.0, upper));
  if (upper > 1.0) {
    const double mid = std::min(upper, 2.0);
    curve += integrate_tanh_sinh(above_one, 1.0, mid);
    if (upper > mid) {
      // y = mid e^u spreads the slowly decaying tail.
      curve += integrate_gk([&](double u) {
        const double y = mid * std::exp(u);
        return y == kInf ? 0.0 : above_one(y) * y;
      }, 0.0, upper == kInf ? kInf : std::log(upper / mid), 1e-10, 1e-9);
    }
  }
  return ray + curve;
}

AngularModel::AngularModel(const ModelParams& m, PNorm p) : params_(m), p_(p) {
  require_angular(m);
  const int n = kCacheNodes;
  nodes_.resize(n);
  values_.resize(n);
  slopes_.resize(n);
  for (int j = 0; j < n; ++j) {
    nodes_[j] = kQuarterPi * (1.0 - std::cos(std::numbers::pi * j / (n - 1)));
  }
  nodes_.front() = 0.0;
  nodes_.back() = kHalfPi;

  std::vector<double> phi(n);
  for (int j = 0; j < n; ++j) phi[j] = angular_cdf_exact(m, p, nodes_[j]);
  total_mass_ = phi.back();
  if (!(total_mass_ >= 1.0 - 1e-6 && total_mass_ <= 2.0 + 1e-6)) {
    std::ostringstream os;
    os << "total angular mass " << total_mass_ << " outside [1, 2] for " << to_string(m.family)
       << " r = " << m.r;
    throw NumericalError(os.str());
  }
  for (int j = 1; j < n; ++j) {
    if (phi[j] < phi[j - 1]) {
      if (phi[j - 1] - phi[j] > 1e-9) throw NumericalError("angular distribution function is not monotone");
      phi[j] = phi[j - 1];
    }
  }
  for (int j = 0; j < n; ++j) values_[j] = phi[j] / total_mass_;
  values_.back() = 1.0;

  for (int j = 0; j < n; ++j) {
    double d = kInf;
    if (j > 0 && j < n - 1) d = angular_density(nodes_[j]) / total_mass_;
    if (!std::isfinite(d)) {
      const int a = std::max(0, j - 1);
      const int b = std::min(n - 1, j + 1);
      d = (values_[b] - values_[a]) / (nodes_[b] - nodes_[a]);
    }
    slopes_[j] = std::max(0.0, d);
  }
  // Fritsch-Carlson limiter keeps the cubic Hermite interpolant monotone.
  for (int j = 0; j + 1 < n; ++j) {
    const double delta = (values_[j + 1] - values_[j]) / (nodes_[j + 1] - nodes_[j]);
    if (delta == 0.0) {
      slopes_[j] = 0.0;
      slopes_[j + 1] = 0.0;
      continue;
    }
    const double a = slopes_[j] / delta;
    const double b = slopes_[j + 1] / delta;
    const double norm2 = a * a + b * b;
    if (norm2 > 9.0) {
      const double tau = 3.0 / std::sqrt(norm2);
      slopes_[j] = tau * a * delta;
      slopes_[j + 1] = tau * b * delta;
    }
  }
}

double AngularModel::angular_density(double theta) const {
  if (!(theta > 0.0 && theta < kHalfPi)) throw DomainError("angular density is defined on (0, pi/2)");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return lp_norm(p_, c, s) / (c * s) * exponent_density(params_, c, s);
}

double AngularModel::angular_cdf(double theta) const { return angular_cdf_exact(params_, p_, theta); }

double AngularModel::normalized_cdf(double theta) const noexcept {
  if (theta <= 0.0) return 0.0;
  if (theta >= kHalfPi) return 1.0;
  const int n = static_cast<int>(nodes_.size());
  const double arg = std::clamp(1.0 - theta / kQuarterPi, -1.0, 1.0);
  int j = static_cast<int>(std::acos(arg) * (n - 1) / std::numbers::pi);
  j = std::clamp(j, 0, n - 2);
  while (j > 0 && nodes_[j] > theta) --j;
  while (j < n - 2 && nodes_[j + 1] <= theta) ++j;
  const double h = nodes_[j + 1] - nodes_[j];
  const double u = (theta - nodes_[j]) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  const double v = h00 * values_[j] + h10 * h * slopes_[j] + h01 * values_[j + 1] + h11 * h * slopes_[j + 1];
  return std::clamp(v, values_[j], values_[j + 1]);
}

std::vector<double> AngularModel::grad_normalized_cdf(double theta, bool* clamped) const {
  return {grad_normalized_cdf_grid(params_, p_, {theta}, clamped).front()};
}

std::vector<double> grad_normalized_cdf_grid(const ModelParams& m, PNorm p, const std::vector<double>& thetas,
                                             bool* clamped) {
  require_angular(m);
  const ParamRange range = estimation_range(m.family);
  const double eps = 1e-4 * std::max(1.0, std::abs(m.r));
  const double lo = std::max(m.r - eps, range.lo);
  const double hi = std::min(m.r + eps, range.hi);
  if (clamped) *clamped = lo != m.r - eps || hi != m.r + eps;
  if (!(hi > lo)) throw DomainError("no room for a finite-difference step in r");
  const AngularModel below({m.family, lo}, p);
  const AngularModel above({m.family, hi}, p);
  std::vector<double> out(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    out[i] = (above.normalized_cdf(thetas[i]) - below.normalized_cdf(thetas[i])) / (hi - lo);
  }
  return out;
}

}  // namespace angof
