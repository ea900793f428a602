#include "angof/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "angof/error.hpp"

namespace angof {

PNorm PNorm::finite(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "L_p exponent must satisfy 1 <= p < inf, got " << p;
    throw DomainError(os.str());
  }
  return PNorm(p);
}

PNorm PNorm::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse L_p exponent '" + text + "'");
  }
  if (used != text.size()) throw DomainError("cannot parse L_p exponent '" + text + "'");
  return finite(v);
}

std::string PNorm::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << p_;
  return os.str();
}

double lp_norm(PNorm p, double x1, double x2) noexcept {
  const double hi = std::max(x1, x2);
  const double lo = std::min(x1, x2);
  if (p.is_infinite() || hi == kInf) return hi;
  if (hi == 0.0) return 0.0;
  if (p.value() == 1.0) return x1 + x2;
  const double ratio = lo / hi;
  return hi * std::pow(1.0 + std::pow(ratio, p.value()), 1.0 / p.value());
}

double y_p(PNorm p, double x) noexcept {
  if (x < 1.0) return kInf;
  if (p.is_infinite()) return 1.0;
  if (x == kInf) return 1.0;
  if (x == 1.0) return kInf;
  // y = (1 - x^{-p})^{-1/p}; expm1 keeps precision just above x = 1.
  const double one_minus = -std::expm1(-p.value() * std::log(x));
  return std::pow(one_minus, -1.0 / p.value());
}

double y_p_prime_abs(PNorm p, double x) {
  if (p.is_infinite()) throw DomainError("y_p' is not defined for p = inf");
  if (!(x > 1.0) || !std::isfinite(x)) throw DomainError("y_p' requires 1 < x < inf");
  // x^{-p-1} (1 - x^{-p})^{-1-1/p}, finite for large x.
  const double lx = std::log(x);
  const double one_minus = -std::expm1(-p.value() * lx);
  return std::exp(-(p.value() + 1.0) * lx) * std::pow(one_minus, -(1.0 + 1.0 / p.value()));
}

double x_p_of_theta(PNorm p, double theta) {
  if (!(theta > 0.0) || theta > kHalfPi) throw DomainError("x_p(theta) requires theta in (0, pi/2]");
  // cos/sin rather than 1/tan so that theta = pi/2 gives an exact zero up to
  // the rounding of pi/2 itself.
  const double cot = theta == kHalfPi ? 0.0 : std::cos(theta) / std::sin(theta);
  return lp_norm(p, 1.0, cot);
}

bool in_C_p_theta(PNorm p, double theta, double x, double y) noexcept {
  if (theta <= 0.0) {
    return y == 0.0 || (x == kInf && y <= 1.0);
  }
  const double curve = y_p(p, x);
  if (theta >= kHalfPi) return y <= curve;
  const double ray = x == kInf ? kInf : x * std::tan(theta);
  return y <= std::min(ray, curve);
}

double constraint_f(PNorm p, double theta) noexcept {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return (s - c) / lp_norm(p, s, c);
}

double constraint_f_prime(PNorm p, double theta) {
  if (p.is_infinite()) throw UnsupportedError("f' is only implemented for finite p");
  const double s = std::max(0.0, std::sin(theta));
  const double c = std::max(0.0, std::cos(theta));
  const double pv = p.value();
  const double n = lp_norm(p, s, c);
  return (std::pow(s, pv - 1.0) + std::pow(c, pv - 1.0)) / std::pow(n, 1.0 + pv);
}

WeightKind parse_weight_kind(const std::string& text) {
  if (text == "const" || text == "constant") return WeightKind::Constant;
  if (text == "invsqrt" || text == "inv_sqrt_pi4") return WeightKind::InvSqrtQuarterPi;
  throw ConfigError("unknown weight kind '" + text + "' (expected const or invsqrt)");
}

std::string to_string(WeightKind q) {
  return q == WeightKind::Constant ? "const" : "invsqrt";
}

double weight_q(WeightKind q, double theta) {
  if (q == WeightKind::Constant) return 1.0;
  const double d = std::abs(theta - kQuarterPi);
  if (d == 0.0) throw DomainError("singular weight evaluated at pi/4");
  return 1.0 / std::sqrt(d);
}

namespace {

// Antiderivative of |t - pi/4|^{-1/2}, continuous and increasing.
double inv_sqrt_primitive(double t) {
  const double d = t - kQuarterPi;
  return d >= 0.0 ? 2.0 * std::sqrt(d) : -2.0 * std::sqrt(-d);
}

}  // namespace

double weight_integral(WeightKind q, double a, double b) {
  if (q == WeightKind::Constant) return b - a;
  return inv_sqrt_primitive(b) - inv_sqrt_primitive(a);
}

}  // namespace angof
