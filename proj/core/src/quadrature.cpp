#include "angof/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "angof/error.hpp"

namespace angof {

namespace bq = boost::math::quadrature;

double integrate_gk(const RealFn& f, double a, double b, double abs_tol, double rel_tol, unsigned max_depth) {
  if (a == b) return 0.0;
  double err = 0.0;
  double l1 = 0.0;
  // Boost's relative tolerance is measured against the L1 norm of f, which
  // is what we want for sign-changing kernels as well.
  const double value = bq::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol, &err, &l1);
  if (!std::isfinite(value) || err > std::max(abs_tol, 10.0 * rel_tol * l1)) {
    std::ostringstream os;
    os << "Gauss-Kronrod did not converge on [" << a << ", " << b << "]: estimate " << value << ", error "
       << err;
    throw NumericalError(os.str());
  }
  return value;
}

double integrate_tanh_sinh(const RealFn& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  // Slivers: tanh-sinh's error estimate is meaningless there.
  if (b - a < 1e-8 * std::max(1.0, std::abs(a))) return composite_gauss_legendre(f, a, b, 1);
  // integrate() is not const in older Boost releases.
  thread_local bq::tanh_sinh<double> integrator;
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double value = integrator.integrate(
      [&](double x, double) {
        // Abscissas can round onto an endpoint; keep them strictly inside.
        return f(std::clamp(x, std::nextafter(a, b), std::nextafter(b, a)));
      },
      a, b, tol, &err, &l1, &levels);
  if (!std::isfinite(value) || err > std::max(1e-9, 100.0 * tol * l1)) {
    std::ostringstream os;
    os << "tanh-sinh did not converge on [" << a << ", " << b << "]: estimate " << value << ", error " << err;
    throw NumericalError(os.str());
  }
  return value;
}

double composite_gauss_legendre(const RealFn& f, double a, double b, int panels) {
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * width;
    const double hi = k + 1 == panels ? b : lo + width;
    sum += bq::gauss<double, 8>::integrate(f, lo, hi);
  }
  return sum;
}

double integrate_refined(const RealFn& f, double a, double b, double rel_tol, double abs_tol, int max_panels) {
  if (a == b) return 0.0;
  int panels = 8;
  double prev = composite_gauss_legendre(f, a, b, panels);
  while (panels < max_panels) {
    panels *= 2;
    const double next = composite_gauss_legendre(f, a, b, panels);
    if (std::abs(next - prev) <= std::max(abs_tol, rel_tol * std::abs(next))) return next;
    prev = next;
  }
  std::ostringstream os;
  os << "composite Gauss-Legendre did not settle on [" << a << ", " << b << "] with " << max_panels << " panels";
  throw NumericalError(os.str());
}

}  // namespace angof
