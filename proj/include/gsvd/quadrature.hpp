#pragma once

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gsvd/errors.hpp"

namespace gsvd {

/// Integral of f over (0, inf).
///
/// Maps the half-line onto (0, 1) with w = u / (1 - u) and runs adaptive
/// 61-point Gauss-Kronrod on the result. Raises AccuracyError if the error
/// estimate exceeds rel_tol * |value| after the subdivision budget.
template <typename F>
double quadrature_integrate(F&& f, double rel_tol = 1e-10, unsigned max_depth = 20) {
  auto mapped = [&f](double u) -> double {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double one_minus = 1.0 - u;
    return f(u / one_minus) / (one_minus * one_minus);
  };
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(mapped, 0.0, 1.0, max_depth, rel_tol, &error);
  if (!std::isfinite(value) || error > rel_tol * std::max(std::abs(value), 1e-300)) {
    throw AccuracyError("quadrature_integrate: error estimate " + std::to_string(error) +
                        " exceeds tolerance for value " + std::to_string(value));
  }
  return value;
}

/// Integral of f over the finite interval [a, b], same error contract.
template <typename F>
double quadrature_integrate_interval(F&& f, double a, double b, double rel_tol = 1e-10,
                                     unsigned max_depth = 20) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, rel_tol, &error);
  if (!std::isfinite(value) || error > rel_tol * std::max(std::abs(value), 1e-300)) {
    throw AccuracyError("quadrature_integrate_interval: error estimate " + std::to_string(error) +
                        " exceeds tolerance for value " + std::to_string(value));
  }
  return value;
}

}  // namespace gsvd
