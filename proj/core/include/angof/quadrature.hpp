#pragma once

// Thin wrappers over Boost.Math quadrature that turn non-convergence into
// NumericalError and fix the tolerances used across the library.

#include <functional>

namespace angof {

using RealFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (15-point) on [a, b]; b may be +inf. Throws
/// NumericalError when the error estimate exceeds
/// max(abs_tol, rel_tol * |I|).
double integrate_gk(const RealFn& f, double a, double b, double abs_tol = 1e-11, double rel_tol = 1e-10,
                    unsigned max_depth = 15);

/// Tanh-sinh on [a, b] for integrands with endpoint singularities.
double integrate_tanh_sinh(const RealFn& f, double a, double b, double tol = 1e-10);

/// Composite 8-point Gauss-Legendre with `panels` equal panels.
double composite_gauss_legendre(const RealFn& f, double a, double b, int panels);

/// Composite Gauss-Legendre starting at 8 panels and doubling until the
/// relative change is below rel_tol (absolute floor abs_tol).
double integrate_refined(const RealFn& f, double a, double b, double rel_tol = 1e-7, double abs_tol = 1e-13,
                         int max_panels = 1 << 14);

}  // namespace angof
