#pragma once

// Closed-form transient analysis of the bilateral process N(t) on Z with
// rate lambda out of even states and mu out of odd states.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <vector>

#include "altbd/errors.hpp"
#include "altbd/rates.hpp"
#include "altbd/specfun.hpp"

namespace altbd {

/// Addresses one transition probability p_{from,to}(t).
struct TransitionQuery {
  State from;
  State to;
  double t;
};

/// Values of the even-state and odd-state generating functions
/// F_k(z,t) = Σ_j z^{2j} p_{k,2j}(t) and G_k(z,t) = Σ_j z^{2j+1} p_{k,2j+1}(t).
struct PgfPair {
  double f;
  double g;

  double total() const { return f + g; }
};

/// h(z) = sqrt((mu z^2 + lambda)(lambda z^2 + mu)).
inline double pgf_h(double z, const Rates& r) {
  const double z2 = z * z;
  return std::sqrt((r.mu * z2 + r.lambda) * (r.lambda * z2 + r.mu));
}

/// Closed-form generating functions for initial state k at real z > 0.
inline PgfPair pgf(State k, double z, double t, const Rates& r) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("pgf: z must be positive and finite");
  require_time(t, "pgf");
  const double h = pgf_h(z, r);
  const double w = t * h / z;
  const double decay = (r.lambda + r.mu) * t;
  // e^{-(lambda+mu)t} cosh(w) and e^{-(lambda+mu)t} sinh(w) without overflow
  const double c = 0.5 * (std::exp(w - decay) + std::exp(-w - decay));
  const double s = 0.5 * (std::exp(w - decay) - std::exp(-w - decay));
  const double zk = std::pow(z, static_cast<double>(k));
  const double z2p1 = z * z + 1.0;
  if (is_even(k)) {
    return {zk / h * (h * c + z * (r.mu - r.lambda) * s), zk / h * r.lambda * z2p1 * s};
  }
  return {zk / h * r.mu * z2p1 * s, zk / h * (h * c + z * (r.lambda - r.mu) * s)};
}

namespace detail {

/// Switches used only by the verification mutation mode.
struct ProbVariant {
  bool swap_offset = false;  ///< use |r-l-1| in place of |r-l+1| (even -> odd)
};

/// log Σ_{j=0}^{n-d} C(n,j) C(n,j+d) rho^{2j+d}.
inline double log_inner_sum(std::int64_t n, std::int64_t d, double log_rho,
                            std::vector<double>& scratch) {
  const std::int64_t count = n - d + 1;
  if (count <= 0) return -std::numeric_limits<double>::infinity();
  scratch.resize(static_cast<std::size_t>(count));
  double log_term = log_binomial(n, d) + static_cast<double>(d) * log_rho;
  double peak = log_term;
  scratch[0] = log_term;
  for (std::int64_t j = 0; j + 1 < count; ++j) {
    // C(n,j+1)/C(n,j) = (n-j)/(j+1);  C(n,j+1+d)/C(n,j+d) = (n-j-d)/(j+d+1)
    log_term += std::log(static_cast<double>((n - j) * (n - j - d)) /
                         static_cast<double>((j + 1) * (j + d + 1))) +
                2.0 * log_rho;
    scratch[static_cast<std::size_t>(j + 1)] = log_term;
    peak = std::max(peak, log_term);
  }
  double acc = 0.0;
  for (double v : scratch) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

/// e^{-(lambda+mu)t} Σ_{n>=d} w_n(t) S(n, d), with either the "same parity"
/// weight (nu t)^{2n}/(2n)! + c (nu t)^{2n+1}/(2n+1)! or the "cross parity"
/// weight (nu t)^{2n+1}/(2n+1)!. Terms are formed in log space.
inline double outer_series(double nu, double other, std::int64_t d, bool same_parity, double t,
                           const SeriesControl& ctl) {
  const double nu_t = nu * t;
  const double log_nu_t = std::log(nu_t);
  const double log_rho = std::log(other / nu);
  const double coeff = (other - nu) / nu;  // same-parity correction factor
  const double decay = (nu + other) * t;
  std::vector<double> scratch;

  SeriesStop stop(ctl);
  // log of (nu t)^{2n}/(2n)!, advanced by recurrence
  double log_even = 2.0 * static_cast<double>(d) * log_nu_t - std::lgamma(2.0 * d + 1.0);
  for (std::int64_t n = d;; ++n) {
    const double two_n = 2.0 * static_cast<double>(n);
    double log_weight = 0.0;
    double sign = 1.0;
    if (same_parity) {
      const double factor = 1.0 + coeff * nu_t / (two_n + 1.0);
      sign = factor < 0.0 ? -1.0 : 1.0;
      log_weight = log_even + std::log(std::abs(factor));
    } else {
      log_weight = log_even + log_nu_t - std::log(two_n + 1.0);
    }
    const double term = sign * std::exp(log_weight + log_inner_sum(n, d, log_rho, scratch) - decay);
    const bool past_peak = n >= d + 5 && two_n >= decay;
    if (stop.add(term, past_peak)) break;
    if (stop.exhausted()) stop.fail("transition_prob");
    log_even += 2.0 * log_nu_t - std::log((two_n + 1.0) * (two_n + 2.0));
  }
  return stop.sum();
}

inline double transition_prob(const TransitionQuery& q, const Rates& r, const SeriesControl& ctl,
                              ProbVariant variant) {
  require_time(q.t, "transition_prob");
  ctl.validate();
  if (q.t == 0.0) return q.from == q.to ? 1.0 : 0.0;

  const State l = half_index(q.from);
  const State rr = half_index(q.to);
  const State diff = rr - l;
  const bool from_even = is_even(q.from);
  const bool to_even = is_even(q.to);
  // Series in powers of the rate out of the initial state.
  const double nu = from_even ? r.lambda : r.mu;
  const double other = from_even ? r.mu : r.lambda;

  if (from_even == to_even) return outer_series(nu, other, std::abs(diff), true, q.t, ctl);
  if (from_even) {
    const State second = variant.swap_offset ? diff - 1 : diff + 1;
    return outer_series(nu, other, std::abs(diff), false, q.t, ctl) +
           outer_series(nu, other, std::abs(second), false, q.t, ctl);
  }
  return outer_series(nu, other, std::abs(diff - 1), false, q.t, ctl) +
         outer_series(nu, other, std::abs(diff), false, q.t, ctl);
}

}  // namespace detail

/// p_{from,to}(t) by the double series obtained from coefficient extraction
/// of the generating functions, dispatched on the parities of both states.
inline double transition_prob(const TransitionQuery& q, const Rates& r,
                              const SeriesControl& ctl = {}) {
  return detail::transition_prob(q, r, ctl, {});
}

/// E[N(t) | N(0) = k]; the chain is symmetric about its start.
inline double mean(State k, double t, const Rates&) {
  require_time(t, "mean");
  return static_cast<double>(k);
}

/// Var[N(t) | N(0) = k]; depends on k only through its parity.
///
/// The transient correction is nu (nu - other) / (lambda+mu)^2 (1 - e^{-2(lambda+mu)t})
/// with nu the rate out of the initial state.
inline double variance(State k, double t, const Rates& r) {
  require_time(t, "variance");
  const double a = r.lambda + r.mu;
  const double nu = r.out_of(k);
  const double other = is_even(k) ? r.mu : r.lambda;
  return 4.0 * r.lambda * r.mu / a * t + nu * (nu - other) / (a * a) * (-std::expm1(-2.0 * a * t));
}

}  // namespace altbd
