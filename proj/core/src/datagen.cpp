#include "angof/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "angof/error.hpp"
#include "angof/models.hpp"
#include "angof/rng.hpp"

namespace angof {

CopulaSpec CopulaSpec::gumbel(double theta) {
  CopulaSpec c;
  c.kind = CopulaKind::Gumbel;
  c.param = theta;
  validate_copula(c);
  return c;
}

CopulaSpec CopulaSpec::husler_reiss(double r) {
  CopulaSpec c;
  c.kind = CopulaKind::HuslerReiss;
  c.param = r;
  validate_copula(c);
  return c;
}

CopulaSpec CopulaSpec::comonotone() { return CopulaSpec{}; }

CopulaSpec CopulaSpec::max_linear(double a11, double a12, double a21, double a22) {
  CopulaSpec c;
  c.kind = CopulaKind::MaxLinear;
  c.a = {a11, a12, a21, a22};
  validate_copula(c);
  return c;
}

CopulaSpec CopulaSpec::mixture(double lambda, const CopulaSpec& base, const CopulaSpec& alt) {
  CopulaSpec c;
  c.kind = CopulaKind::Mixture;
  c.lambda = lambda;
  c.base = std::make_shared<const CopulaSpec>(base);
  c.alt = std::make_shared<const CopulaSpec>(alt);
  validate_copula(c);
  return c;
}

void validate_copula(const CopulaSpec& c) {
  switch (c.kind) {
    case CopulaKind::Gumbel:
      if (!(c.param >= 1.0) || !std::isfinite(c.param)) throw DomainError("Gumbel parameter must be >= 1");
      return;
    case CopulaKind::HuslerReiss:
      if (!(c.param > 0.0) || !std::isfinite(c.param)) throw DomainError("Husler-Reiss parameter must be > 0");
      return;
    case CopulaKind::Comonotone:
      return;
    case CopulaKind::MaxLinear:
      for (double v : c.a) {
        if (!(v >= 0.0)) throw DomainError("max-linear coefficients must be nonnegative");
      }
      // Each X_j must have Frechet(1) margins.
      if (std::abs(c.a[0] + c.a[1] - 1.0) > 1e-12 || std::abs(c.a[2] + c.a[3] - 1.0) > 1e-12) {
        throw DomainError("max-linear coefficients of each component must sum to 1");
      }
      return;
    case CopulaKind::Mixture:
      if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) throw DomainError("mixture weight must lie in [0, 1]");
      if (!c.base || !c.alt) throw DomainError("mixture needs two components");
      validate_copula(*c.base);
      validate_copula(*c.alt);
      return;
  }
}

std::string describe(const CopulaSpec& c) {
  std::ostringstream os;
  os.precision(17);
  switch (c.kind) {
    case CopulaKind::Gumbel: os << "gumbel(" << c.param << ")"; break;
    case CopulaKind::HuslerReiss: os << "husler_reiss(" << c.param << ")"; break;
    case CopulaKind::Comonotone: os << "comonotone"; break;
    case CopulaKind::MaxLinear:
      os << "max_linear(" << c.a[0] << "," << c.a[1] << "," << c.a[2] << "," << c.a[3] << ")";
      break;
    case CopulaKind::Mixture:
      os << "mixture(" << c.lambda << "," << describe(*c.base) << "," << describe(*c.alt) << ")";
      break;
  }
  return os.str();
}

namespace {

// Gumbel(theta) is the logistic stdf with r = 1/theta.
ModelParams ev_params(const CopulaSpec& c) {
  if (c.kind == CopulaKind::Gumbel) return {Family::Logistic, 1.0 / c.param};
  return {Family::HuslerReiss, c.param};
}

bool is_ev(const CopulaSpec& c) { return c.kind == CopulaKind::Gumbel || c.kind == CopulaKind::HuslerReiss; }

void check_unit(double u, double v) {
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0)) throw DomainError("copula arguments must lie in (0, 1)");
}

}  // namespace

double copula_cdf(const CopulaSpec& c, double u, double v) {
  check_unit(u, v);
  switch (c.kind) {
    case CopulaKind::Gumbel:
    case CopulaKind::HuslerReiss:
      return std::exp(-stdf(ev_params(c), -std::log(u), -std::log(v)));
    case CopulaKind::Comonotone:
      return std::min(u, v);
    case CopulaKind::MaxLinear: {
      const double x = -std::log(u);
      const double y = -std::log(v);
      return std::exp(-std::max(c.a[0] * x, c.a[2] * y) - std::max(c.a[1] * x, c.a[3] * y));
    }
    case CopulaKind::Mixture:
      return (1.0 - c.lambda) * copula_cdf(*c.base, u, v) + c.lambda * copula_cdf(*c.alt, u, v);
  }
  return 0.0;
}

double conditional_cdf(const CopulaSpec& c, double u, double v) {
  check_unit(u, v);
  if (is_ev(c)) {
    const ModelParams m = ev_params(c);
    const double x = -std::log(u);
    const double y = -std::log(v);
    return std::exp(-stdf(m, x, y)) * stdf_partials(m, x, y)[0] / u;
  }
  if (c.kind == CopulaKind::Mixture) {
    return (1.0 - c.lambda) * conditional_cdf(*c.base, u, v) + c.lambda * conditional_cdf(*c.alt, u, v);
  }
  throw UnsupportedError("conditional_cdf is defined for Gumbel, Husler-Reiss and their mixtures only");
}

namespace {

// Solves dC/du(u, v) = w for v by bisection.
double invert_conditional(const CopulaSpec& c, double u, double w) {
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0 || mid >= 1.0) break;
    if (conditional_cdf(c, u, mid) < w) lo = mid;
    else hi = mid;
  }
  const double v = 0.5 * (lo + hi);
  if (!(v > 0.0 && v < 1.0)) throw NumericalError("conditional inversion left the unit interval");
  return v;
}

double frechet(double u) { return -1.0 / std::log(u); }

std::array<double, 2> draw_pair(const CopulaSpec& c, const Key& key, std::uint32_t lo, std::uint32_t hi,
                                std::uint32_t depth) {
  const std::array<double, 2> uw = uniform_pair({lo, hi, depth, 0}, key);
  switch (c.kind) {
    case CopulaKind::Gumbel:
    case CopulaKind::HuslerReiss:
      return {uw[0], invert_conditional(c, uw[0], uw[1])};
    case CopulaKind::Comonotone:
      return {uw[0], uw[0]};
    case CopulaKind::MaxLinear: {
      const double z1 = frechet(uw[0]);
      const double z2 = frechet(uw[1]);
      const double x1 = std::max(c.a[0] * z1, c.a[1] * z2);
      const double x2 = std::max(c.a[2] * z1, c.a[3] * z2);
      return {std::exp(-1.0 / x1), std::exp(-1.0 / x2)};
    }
    case CopulaKind::Mixture: {
      const double b = uniform_pair({lo, hi, depth, 1}, key)[0];
      return draw_pair(b < c.lambda ? *c.alt : *c.base, key, lo, hi, depth + 1);
    }
  }
  return {0.0, 0.0};
}

}  // namespace

BivariateSample sample(const CopulaSpec& c, int n, std::uint64_t seed) {
  validate_copula(c);
  if (n < 1) throw DomainError("sample size must be at least 1");
  const Key key = key_from_seed(seed);
  BivariateSample s;
  s.x1.resize(n);
  s.x2.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto uv = draw_pair(c, key, static_cast<std::uint32_t>(i), 0u, 0u);
    s.x1[i] = uv[0];
    s.x2[i] = uv[1];
  }
  return s;
}

CopulaSpec scenario(const CopulaSpec& null, int scenario_id, double lambda) {
  if (scenario_id == 1) return CopulaSpec::mixture(lambda, null, CopulaSpec::comonotone());
  if (scenario_id == 2) return CopulaSpec::mixture(lambda, null, CopulaSpec::max_linear(0.7, 0.3, 0.1, 0.9));
  throw ConfigError("scenario must be 1 or 2");
}

CopulaSpec null_copula(Family f) {
  return f == Family::Logistic ? CopulaSpec::gumbel(2.0) : CopulaSpec::husler_reiss(1.0);
}

}  // namespace angof
