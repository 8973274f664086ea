#pragma once

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "altbd/errors.hpp"

namespace altbd {

/// Adaptive 15-point Gauss-Kronrod quadrature of f over [lo, hi].
///
/// Throws QuadratureError when the error estimate exceeds `abs_tol`.
template <class F>
double integrate(const F& f, double lo, double hi, double abs_tol) {
  if (!(abs_tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
  if (hi == lo) return 0.0;
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  // The rule's tolerance is relative to the L1 norm; rerun once with it
  // tightened if the first pass misses the absolute target.
  double error = 0.0;
  double l1 = 0.0;
  double value = Rule::integrate(f, lo, hi, 20, 0.1 * abs_tol, &error, &l1);
  if (std::isfinite(value) && error > abs_tol && l1 > 1.0)
    value = Rule::integrate(f, lo, hi, 20, 0.1 * abs_tol / l1, &error, &l1);
  if (!std::isfinite(value) || !(error <= abs_tol))
    throw QuadratureError("integrate: tolerance not reached", value, error);
  return value;
}

}  // namespace altbd
