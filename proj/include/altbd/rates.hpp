#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "altbd/errors.hpp"

namespace altbd {

/// State of either chain. States of the bilateral process range over all of Z.
using State = std::int64_t;

/// Alternating jump rates: `lambda` out of even states, `mu` out of odd states
/// (to each neighbour).
struct Rates {
  double lambda;
  double mu;

  Rates(double lambda_rate, double mu_rate) : lambda(lambda_rate), mu(mu_rate) {
    if (!(lambda > 0.0) || !(mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu))
      throw DomainError("Rates: lambda and mu must be positive and finite");
  }

  /// (mu, lambda): the parameter swap appearing in the odd-shift symmetries.
  Rates swapped() const { return {mu, lambda}; }

  /// Rate of jumping to each neighbour from `state`.
  double out_of(State state) const { return state % 2 == 0 ? lambda : mu; }

  double max() const { return lambda > mu ? lambda : mu; }
};

/// a = lambda + mu, b = lambda - mu.
struct SumDiffParams {
  double a;
  double b;

  explicit SumDiffParams(const Rates& r) : a(r.lambda + r.mu), b(r.lambda - r.mu) {}
};

constexpr bool is_even(State k) noexcept { return k % 2 == 0; }

/// The l of k = 2l or k = 2l + 1 (floor division by two, also for negative k).
constexpr State half_index(State k) noexcept { return (k - (is_even(k) ? 0 : 1)) / 2; }

inline void require_time(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError(std::string(who) + ": time must be finite and non-negative");
}

}  // namespace altbd
