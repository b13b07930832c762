#pragma once

// Thin wrappers over Boost.Math quadrature with the tolerances used throughout.

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace chaoswpt::quad {

inline constexpr double kTolerance = 1e-12;
// Finite-interval rule: tighter than this only chases rounding noise and
// drives the bisection to full depth.
inline constexpr double kFiniteTolerance = 1e-10;

/// Integral over [a, +inf).
template <typename F>
double upper_tail(F f, double a) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, a, std::numeric_limits<double>::infinity(), kTolerance);
}

/// Integral over (-inf, b].
template <typename F>
double lower_tail(F f, double b) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, -std::numeric_limits<double>::infinity(), b, kTolerance);
}

/// Adaptive Gauss-Kronrod (7/15) over a finite interval.
template <typename F>
double finite(F f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 10, kFiniteTolerance);
}

/// Single 15-point Kronrod pass, no bisection. For intervals narrow relative to
/// their position, where abscissa rounding defeats the adaptive error estimate.
template <typename F>
double kronrod_fixed(F f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, kFiniteTolerance);
}

/// Finite integral choosing kronrod_fixed for narrow intervals.
template <typename F>
double finite_auto(F f, double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (b - a <= 1e-2 * scale) return kronrod_fixed(f, a, b);
  return finite(f, a, b);
}

}  // namespace chaoswpt::quad
