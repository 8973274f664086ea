#pragma once

// Transient analysis of the process R(t) on {0, 1, 2, ...} with a reflecting
// state 0 (rate lambda up from 0, otherwise the alternating rates of N(t)).
//
// Laplace domain: pi_{1,n}(s) from the roots psi_1^2(s), psi_2^2(s) of
//   lambda mu x^4 - [(lambda+mu+s)^2 - lambda^2 - mu^2] x^2 + lambda mu = 0.
// Time domain: q_{0,0}(t) and q_{1,0}(t) as 1F2 double series, plus
// convolution-integral representations used as independent routes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>

#include "altbd/errors.hpp"
#include "altbd/quadrature.hpp"
#include "altbd/rates.hpp"
#include "altbd/specfun.hpp"

namespace altbd {

// ---------------------------------------------------------------------------
// Laplace domain
// ---------------------------------------------------------------------------

/// Roots of the biquadratic at transform variable s.
///
/// a_term^2 = (a+s)^2 - a^2 and b_term^2 = (a+s)^2 - b^2 with a = lambda+mu,
/// b = lambda-mu; psi1_sq = (A+B)^2/(a^2-b^2) > 1 and psi2_sq = 1/psi1_sq.
template <class Scalar>
struct BasicLaplaceRoots {
  Scalar s;
  Scalar a_term;
  Scalar b_term;
  Scalar psi1_sq;
  Scalar psi2_sq;
};

using LaplaceRoots = BasicLaplaceRoots<double>;

/// Roots for real or complex s (Re s > 0). The square roots are taken as
/// products of principal roots, A = sqrt(s) sqrt(s+2a) and
/// B = sqrt(s+2mu) sqrt(s+2lambda), which is the branch analytic in Re s > 0
/// and positive on the real axis.
template <class Scalar>
BasicLaplaceRoots<Scalar> laplace_roots_at(Scalar s, const Rates& r) {
  using std::sqrt;
  const SumDiffParams p(r);
  const Scalar a_term = sqrt(s) * sqrt(s + 2.0 * p.a);
  const Scalar b_term = sqrt(s + 2.0 * r.mu) * sqrt(s + 2.0 * r.lambda);
  const double disc = p.a * p.a - p.b * p.b;  // = 4 lambda mu
  const Scalar sum = a_term + b_term;
  // (A-B)^2/(a^2-b^2) written as (a^2-b^2)/(A+B)^2 to avoid cancellation
  return {s, a_term, b_term, sum * sum / disc, disc / (sum * sum)};
}

inline LaplaceRoots laplace_roots(double s, const Rates& r) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("laplace_roots: s must be positive");
  return laplace_roots_at(s, r);
}

/// Laplace transform pi_{1,n}(s) of q_{1,n}(t) for real or complex s.
template <class Scalar>
Scalar pi_1n_at(Scalar s, std::int64_t n, const Rates& r) {
  if (n < 0) throw DomainError("pi_1n: n must be non-negative");
  const auto roots = laplace_roots_at(s, r);
  const double lam = r.lambda;
  const double mu = r.mu;
  if (n == 0) {
    const Scalar ab = roots.a_term * roots.b_term;
    return ((2.0 * lam + s) * (2.0 * mu + s) - ab) / (lam * (s * (2.0 * mu + s) + ab));
  }
  const Scalar psi = roots.psi2_sq;
  const Scalar denom = mu * (1.0 - psi) - s * psi;
  if (n % 2 == 0) {
    const std::int64_t m = n / 2;
    return (2.0 * mu + s) * (lam + s) * std::pow(psi, static_cast<double>(m + 1)) /
           (lam * lam * denom);
  }
  const std::int64_t m = (n + 1) / 2;
  return (lam + s) * std::pow(psi, static_cast<double>(m)) * (1.0 + psi) / (lam * denom);
}

inline double pi_1n(double s, std::int64_t n, const Rates& r) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("pi_1n: s must be positive");
  return pi_1n_at(s, n, r);
}

/// Largest absolute residual of each line of the linear system satisfied by
/// pi_{1,n}(s) (forward equations of R(t) started at 1, transformed).
struct LaplaceSystemResiduals {
  double boundary = 0.0;  ///< (lambda+s) pi_{1,0} - mu pi_{1,1}
  double first = 0.0;     ///< (2mu+s) pi_{1,1} - 1 - lambda pi_{1,2} - lambda pi_{1,0}
  double even = 0.0;      ///< (2lambda+s) pi_{1,2n} - mu (pi_{1,2n-1} + pi_{1,2n+1}), n >= 1
  double odd = 0.0;       ///< (2mu+s) pi_{1,2n-1} - lambda (pi_{1,2n} + pi_{1,2n-2}), n >= 2

  double max() const { return std::max({boundary, first, even, odd}); }
};

inline LaplaceSystemResiduals laplace_system_residuals(double s, const Rates& r,
                                                       std::int64_t n_max = 20) {
  const double lam = r.lambda;
  const double mu = r.mu;
  auto pi = [&](std::int64_t n) { return pi_1n(s, n, r); };
  LaplaceSystemResiduals res;
  res.boundary = std::abs((lam + s) * pi(0) - mu * pi(1));
  res.first = std::abs((2.0 * mu + s) * pi(1) - 1.0 - lam * pi(2) - lam * pi(0));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    res.even = std::max(res.even,
                        std::abs((2.0 * lam + s) * pi(2 * n) - mu * (pi(2 * n - 1) + pi(2 * n + 1))));
    if (n >= 2)
      res.odd = std::max(res.odd, std::abs((2.0 * mu + s) * pi(2 * n - 1) -
                                           lam * (pi(2 * n) + pi(2 * n - 2))));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Time domain: series
// ---------------------------------------------------------------------------

namespace detail {

/// Pieces of the k-th term of the q_{0,0} series, all carrying e^{-at}:
///   c_k(t) = alpha t^{2k} F1 + beta t^{2k+1} F2,
///   F1 = 1F2(-1/2; k+1/2, k+1; b^2 t^2/4), F2 = 1F2(-1/2; k+1, k+3/2; b^2 t^2/4).
struct Q00Term {
  double alpha_part;  ///< e^{-at} (a^{2k+1} + b^{2k+1}) (t/2)^{2k} / k!^2
  double beta_part;   ///< e^{-at} (a^{2k+2} - b^{2k+2}) t (t/2)^{2k} / (2 (k+1) k!^2)
};

class Q00Terms {
 public:
  Q00Terms(double t, const Rates& r) : p_(r), t_(t) {
    log_half_t_ = std::log(0.5 * t);
    log_base_ = -p_.a * t;  // log of e^{-at} (t/2)^{2k} / k!^2 at k = 0
    ratio_ = p_.b / p_.a;
    ratio_pow_ = ratio_;  // (b/a)^{2k+1}
  }

  Q00Term next() {
    const double kd = static_cast<double>(k_);
    const double la = std::log(p_.a);
    const double alpha = std::exp(log_base_ + (2.0 * kd + 1.0) * la) * (1.0 + ratio_pow_);
    const double beta = std::exp(log_base_ + std::log(t_) + (2.0 * kd + 2.0) * la -
                                 std::log(2.0 * (kd + 1.0))) *
                        (1.0 - ratio_pow_ * ratio_);
    log_base_ += 2.0 * log_half_t_ - 2.0 * std::log(kd + 1.0);
    ratio_pow_ *= ratio_ * ratio_;
    ++k_;
    return {alpha, beta};
  }

 private:
  SumDiffParams p_;
  double t_;
  double log_half_t_;
  double log_base_;
  double ratio_;
  double ratio_pow_;
  std::int64_t k_ = 0;
};

}  // namespace detail

/// q_{0,0}(t) = P{R(t) = 0 | R(0) = 0} as the 1F2 double series
///   e^{-at}/(a+b) Σ_k (t/2)^{2k}/k!^2 { (a^{2k+1}+b^{2k+1}) F1 + t (a^{2k+2}-b^{2k+2})/(2(k+1)) F2 }.
inline double q00(double t, const Rates& r, const SeriesControl& ctl = {}) {
  require_time(t, "q00");
  ctl.validate();
  if (t == 0.0) return 1.0;
  const SumDiffParams p(r);
  const double x = 0.25 * p.b * p.b * t * t;
  detail::Q00Terms terms(t, r);
  detail::SeriesStop stop(ctl);
  for (std::int64_t k = 0;; ++k) {
    const double kd = static_cast<double>(k);
    const auto piece = terms.next();
    const double term = piece.alpha_part * hyp1f2(-0.5, kd + 0.5, kd + 1.0, x, ctl) +
                        piece.beta_part * hyp1f2(-0.5, kd + 1.0, kd + 1.5, x, ctl);
    if (stop.add(term, kd >= 0.5 * p.a * t)) break;
    if (stop.exhausted()) stop.fail("q00");
  }
  return stop.sum() / (p.a + p.b);
}

/// q_{1,0}(t) = P{R(t) = 0 | R(0) = 1} as a 1F2 double series.
///
/// Uses q_{1,0} = q_{0,0} + q_{0,0}'/lambda (forward equation at 0 together
/// with lambda q_{1,0} = mu q_{0,1}), differentiating the q_{0,0} series term
/// by term: q_{1,0}(t) = e^{-at}/(lambda(a+b)) Σ_k [c_k'(t) - mu c_k(t)].
inline double q10_series(double t, const Rates& r, const SeriesControl& ctl = {}) {
  require_time(t, "q10_series");
  ctl.validate();
  if (t == 0.0) return 0.0;
  const SumDiffParams p(r);
  const double b2 = p.b * p.b;
  const double x = 0.25 * b2 * t * t;
  const double dx = 0.5 * b2 * t;  // dx/dt
  detail::Q00Terms terms(t, r);
  detail::SeriesStop stop(ctl);
  for (std::int64_t k = 0;; ++k) {
    const double kd = static_cast<double>(k);
    const auto piece = terms.next();
    const double f1 = hyp1f2(-0.5, kd + 0.5, kd + 1.0, x, ctl);
    const double f2 = hyp1f2(-0.5, kd + 1.0, kd + 1.5, x, ctl);
    // d/dx 1F2(a; b1, b2; x) = a/(b1 b2) 1F2(a+1; b1+1, b2+1; x)
    const double f1_prime = -0.5 / ((kd + 0.5) * (kd + 1.0)) * hyp1f2(0.5, kd + 1.5, kd + 2.0, x, ctl);
    const double f2_prime = -0.5 / ((kd + 1.0) * (kd + 1.5)) * hyp1f2(0.5, kd + 2.0, kd + 2.5, x, ctl);
    const double value = piece.alpha_part * f1 + piece.beta_part * f2;
    const double slope = piece.alpha_part * (2.0 * kd / t * f1 + dx * f1_prime) +
                         piece.beta_part * ((2.0 * kd + 1.0) / t * f2 + dx * f2_prime);
    if (stop.add(slope - r.mu * value, kd >= 0.5 * p.a * t)) break;
    if (stop.exhausted()) stop.fail("q10_series");
  }
  return stop.sum() / (r.lambda * (p.a + p.b));
}

// ---------------------------------------------------------------------------
// Time domain: convolution integrals
// ---------------------------------------------------------------------------

namespace detail {

/// Kernels of the convolution forms, each multiplied by e^{-a x}:
///   h(x)  = a [I0(ax) + I1(ax)]                 <-> (u + a - A)/A
///   h'(x) = a^2 [I0(ax) + I1(ax) - I1(ax)/(ax)]
///   Y(x)  = b^2 I1(bx)/(bx)                      <-> u - B
///   J(x)  = (b^2 x / 2) 1F2(1/2; 3/2, 2; b^2 x^2/4) = ∫_0^x Y  <-> (u - B)/u
/// where u = s + a.
class ScaledKernels {
 public:
  ScaledKernels(const Rates& r, const SeriesControl& ctl) : p_(r), ctl_(ctl) {}

  double h(double x) const {
    const double ax = p_.a * x;
    return p_.a * (bessel_i_scaled(0, ax, ctl_) + bessel_i_scaled(1, ax, ctl_));
  }

  double h_prime(double x) const {
    const double ax = p_.a * x;
    return p_.a * p_.a *
           (bessel_i_scaled(0, ax, ctl_) + bessel_i_scaled(1, ax, ctl_) -
            bessel_i1_over_x_scaled(ax, ctl_));
  }

  double y(double x) const {
    const double bx = std::abs(p_.b) * x;
    return p_.b * p_.b * bessel_i1_over_x_scaled(bx, ctl_) * std::exp((std::abs(p_.b) - p_.a) * x);
  }

  double j(double x) const {
    const double b2 = p_.b * p_.b;
    if (b2 == 0.0 || x == 0.0) return 0.0;
    return std::exp(-p_.a * x) * 0.5 * b2 * x * hyp1f2(0.5, 1.5, 2.0, 0.25 * b2 * x * x, ctl_);
  }

 private:
  SumDiffParams p_;
  SeriesControl ctl_;
};

}  // namespace detail

/// q_{0,0}(t) from the Laplace-domain identity
///   (a+b) pi_{0,0} = b/u - (u-B)/u + (u+a-A)/A - (u-B)(u+a-A)/(uA),
/// i.e. (a+b) e^{at} q_{0,0} = b - J(t) + h(t) - ∫_0^t J(t-τ) h(τ) dτ.
inline double q00_integral(double t, const Rates& r, double quad_tol = 1e-10,
                           const SeriesControl& ctl = {}) {
  require_time(t, "q00_integral");
  if (t == 0.0) return 1.0;
  const SumDiffParams p(r);
  const detail::ScaledKernels k(r, ctl);
  const double conv = integrate([&](double tau) { return k.j(t - tau) * k.h(tau); }, 0.0, t, quad_tol);
  return (p.b * std::exp(-p.a * t) - k.j(t) + k.h(t) - conv) / (p.a + p.b);
}

/// q_{1,0}(t) by quadrature of the inverse of
///   pi_{1,0}(s) = [(2lambda+s)(2mu+s) - AB] / (lambda [s(2mu+s) + AB]),
/// written as
///   lambda (a+b) e^{at} q_{1,0}(t) = h'(t) - mu h(t) - b mu - Y(t) + mu J(t)
///                                    + ∫_0^t [mu J(t-τ) - Y(t-τ)] h(τ) dτ.
/// The I1(z)/z factors in h' and Y take their limit 1/2 at z = 0.
inline double q10_integral(double t, const Rates& r, double quad_tol = 1e-10,
                           const SeriesControl& ctl = {}) {
  require_time(t, "q10_integral");
  if (t == 0.0) return 0.0;
  const SumDiffParams p(r);
  const double mu = r.mu;
  const detail::ScaledKernels k(r, ctl);
  const double conv = integrate(
      [&](double tau) { return (mu * k.j(t - tau) - k.y(t - tau)) * k.h(tau); }, 0.0, t, quad_tol);
  const double bracket = k.h_prime(t) - mu * k.h(t) - p.b * mu * std::exp(-p.a * t) - k.y(t) +
                         mu * k.j(t) + conv;
  return bracket / (r.lambda * (p.a + p.b));
}

// ---------------------------------------------------------------------------
// Even-state probability and moments
// ---------------------------------------------------------------------------

/// A reentrant evaluator of tau -> q_{k,0}(tau).
template <class F>
concept ZeroStateProbability = std::invocable<const F&, double> &&
                               std::convertible_to<std::invoke_result_t<const F&, double>, double>;

namespace detail {

inline void require_start(State k, const char* who) {
  if (k < 0) throw DomainError(std::string(who) + ": initial state must be non-negative");
}

inline void require_closed_form_start(State k, const char* who) {
  if (k != 0 && k != 1)
    throw DomainError(std::string(who) + ": closed forms exist for initial state 0 or 1 only");
}

inline double initial_even_mass(State k) { return is_even(k) ? 1.0 : 0.0; }

}  // namespace detail

/// P_k(t) = P{R(t) even | R(0) = k}, the solution of
///   dP/dt = -2(lambda+mu) P + lambda q_{k,0}(t) + 2 mu,  P(0) = [k even]:
///   P_k(t) = mu/a + (P_k(0) - mu/a) e^{-2at} + lambda ∫_0^t e^{-2a(t-τ)} q_{k,0}(τ) dτ.
template <ZeroStateProbability Q>
double p_even(State k, double t, const Rates& r, const Q& q_k0, double quad_tol = 1e-12) {
  detail::require_start(k, "p_even");
  require_time(t, "p_even");
  const double a = r.lambda + r.mu;
  const double base = r.mu / a;
  const double p0 = detail::initial_even_mass(k);
  const double conv = integrate(
      [&](double tau) { return std::exp(-2.0 * a * (t - tau)) * q_k0(tau); }, 0.0, t, quad_tol);
  return base + (p0 - base) * std::exp(-2.0 * a * t) + r.lambda * conv;
}

/// E[R(t) | R(0) = k] = k + lambda ∫_0^t q_{k,0}.
template <ZeroStateProbability Q>
double r_mean(State k, double t, const Rates& r, const Q& q_k0, double quad_tol = 1e-11) {
  detail::require_start(k, "r_mean");
  require_time(t, "r_mean");
  return static_cast<double>(k) + r.lambda * integrate(q_k0, 0.0, t, quad_tol);
}

/// Var[R(t) | R(0) = k] =
///   2(lambda-mu) ∫P_k - lambda(2k+1) ∫q_{k,0} - lambda^2 (∫q_{k,0})^2 + 2 mu t.
///
/// ∫_0^t P_k is reduced by Fubini to a single quadrature:
///   (mu/a) t + (P_k(0) - mu/a)(1 - e^{-2at})/(2a) + (lambda/2a) ∫_0^t q(σ)(1 - e^{-2a(t-σ)}) dσ.
template <ZeroStateProbability Q>
double r_variance(State k, double t, const Rates& r, const Q& q_k0, double quad_tol = 1e-11) {
  detail::require_start(k, "r_variance");
  require_time(t, "r_variance");
  const double lam = r.lambda;
  const double mu = r.mu;
  const double a = lam + mu;
  const double base = mu / a;
  const double p0 = detail::initial_even_mass(k);
  const double int_q = integrate(q_k0, 0.0, t, quad_tol);
  const double int_q_weighted = integrate(
      [&](double s) { return q_k0(s) * -std::expm1(-2.0 * a * (t - s)); }, 0.0, t, quad_tol);
  const double int_p = base * t + (p0 - base) * -std::expm1(-2.0 * a * t) / (2.0 * a) +
                       lam / (2.0 * a) * int_q_weighted;
  const double kd = static_cast<double>(k);
  return 2.0 * (lam - mu) * int_p - lam * (2.0 * kd + 1.0) * int_q - lam * lam * int_q * int_q +
         2.0 * mu * t;
}

/// The closed-form q_{k,0} for k in {0, 1}: q00 for k = 0, q10_series for k = 1.
inline auto zero_state_probability(State k, const Rates& r, const SeriesControl& ctl = {}) {
  detail::require_closed_form_start(k, "zero_state_probability");
  return [k, r, ctl](double tau) { return k == 0 ? q00(tau, r, ctl) : q10_series(tau, r, ctl); };
}

inline double p_even(State k, double t, const Rates& r, const SeriesControl& ctl = {}) {
  return p_even(k, t, r, zero_state_probability(k, r, ctl));
}

inline double r_mean(State k, double t, const Rates& r, const SeriesControl& ctl = {}) {
  return r_mean(k, t, r, zero_state_probability(k, r, ctl));
}

inline double r_variance(State k, double t, const Rates& r, const SeriesControl& ctl = {}) {
  return r_variance(k, t, r, zero_state_probability(k, r, ctl));
}

}  // namespace altbd
