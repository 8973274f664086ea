#pragma once

// Scalar special functions: modified Bessel functions of the first kind,
// the generalized hypergeometric function 1F2 and log-binomials.
//
// Every series is accumulated with a running term-ratio recurrence and the
// same stopping rule (see detail::SeriesStop).

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "altbd/errors.hpp"

namespace altbd {

/// Truncation policy shared by all infinite-series evaluations.
struct SeriesControl {
  double rel_tol = 1e-14;
  std::size_t max_terms = 10'000;

  void validate() const {
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol))
      throw DomainError("SeriesControl: rel_tol must be positive and finite");
    if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be at least 1");
  }
};

/// Value of a summed series together with the bookkeeping needed to judge it.
struct SeriesSum {
  double value = 0.0;
  double abs_sum = 0.0;  ///< sum of |term|; bounds the rounding error
  double error_bound = 0.0;
  std::size_t terms = 0;
};

namespace detail {

/// Two-consecutive-small-terms stopping rule.
///
/// A term is small when |term| <= rel_tol * |sum|, or when it is below the
/// rounding floor eps * sum|term| (adding it cannot change the computed sum;
/// needed where a series crosses zero). The caller supplies a "past the peak"
/// flag so that the rule does not fire while terms are still growing.
class SeriesStop {
 public:
  explicit SeriesStop(const SeriesControl& ctl) : ctl_(ctl) {}

  /// Adds `term`; returns true once the series may be truncated.
  bool add(double term, bool past_peak) {
    sum_ += term;
    abs_sum_ += std::abs(term);
    ++terms_;
    const bool small = std::abs(term) <= ctl_.rel_tol * std::abs(sum_) ||
                       std::abs(term) <= std::numeric_limits<double>::epsilon() * abs_sum_;
    run_ = (small && past_peak) ? run_ + 1 : 0;
    return run_ >= 2;
  }

  /// Multiplies the accumulated sums by 2^bits (exact).
  void rescale(int bits) {
    sum_ = std::ldexp(sum_, bits);
    abs_sum_ = std::ldexp(abs_sum_, bits);
  }

  bool exhausted() const { return terms_ >= ctl_.max_terms; }
  double sum() const { return sum_; }
  double abs_sum() const { return abs_sum_; }
  std::size_t terms() const { return terms_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConvergenceError(what + ": term cap reached", sum_, terms_);
  }

 private:
  const SeriesControl& ctl_;
  double sum_ = 0.0;
  double abs_sum_ = 0.0;
  std::size_t terms_ = 0;
  int run_ = 0;
};

inline bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

inline void require_finite(double x, const char* who) {
  if (!std::isfinite(x)) throw DomainError(std::string(who) + ": argument must be finite");
}

// Power-series of I_n(x) for x >= 0, rescaled by 2^-kRescaleBits whenever the
// running sum grows large. Returns (mantissa, number of rescalings).
inline constexpr int kRescaleBits = 900;

struct ScaledSum {
  double mantissa;
  int rescales;
};

inline ScaledSum bessel_i_series(unsigned order, double x, double first_term_factor,
                                 const SeriesControl& ctl) {
  const double half = 0.5 * x;
  double term = first_term_factor;
  for (unsigned j = 1; j <= order; ++j) term *= half / j;
  const double q = half * half;

  SeriesStop stop(ctl);
  int rescales = 0;
  for (std::size_t m = 0;; ++m) {
    const double ratio = q / ((m + 1.0) * (m + 1.0 + order));
    if (stop.add(term, ratio < 0.5)) break;
    if (stop.exhausted()) stop.fail("bessel_i");
    term *= ratio;
    if (stop.sum() > 0x1p900) {
      stop.rescale(-kRescaleBits);
      term = std::ldexp(term, -kRescaleBits);
      ++rescales;
    }
  }
  return {stop.sum(), rescales};
}

}  // namespace detail

/// Modified Bessel function of the first kind, I_order(x).
///
/// Summed as Σ (x/2)^{2m+order} / (m! (m+order)!) with relative error at most
/// ctl.rel_tol. Negative x is accepted through I_n(-x) = (-1)^n I_n(x).
inline double bessel_i(int order, double x, const SeriesControl& ctl = {}) {
  detail::require_finite(x, "bessel_i");
  if (order < 0) throw DomainError("bessel_i: order must be non-negative");
  ctl.validate();
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  const double ax = std::abs(x);
  const auto s = detail::bessel_i_series(static_cast<unsigned>(order), ax, 1.0, ctl);
  const double v = std::ldexp(s.mantissa, detail::kRescaleBits * s.rescales);
  if (!std::isfinite(v)) throw DomainError("bessel_i: result overflows double");
  return (x < 0.0 && order % 2 == 1) ? -v : v;
}

/// Exponentially scaled e^{-|x|} I_order(x). Supported for |x| <= 700.
inline double bessel_i_scaled(int order, double x, const SeriesControl& ctl = {}) {
  detail::require_finite(x, "bessel_i_scaled");
  if (order < 0) throw DomainError("bessel_i_scaled: order must be non-negative");
  ctl.validate();
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  const double ax = std::abs(x);
  if (ax > 700.0) throw DomainError("bessel_i_scaled: |x| > 700 is not supported");
  const auto s = detail::bessel_i_series(static_cast<unsigned>(order), ax, std::exp(-ax), ctl);
  const double v = std::ldexp(s.mantissa, detail::kRescaleBits * s.rescales);
  return (x < 0.0 && order % 2 == 1) ? -v : v;
}

/// e^{-|x|} I_1(x)/x, continuous at x = 0 where it equals 1/2.
inline double bessel_i1_over_x_scaled(double x, const SeriesControl& ctl = {}) {
  if (x == 0.0) return 0.5;
  return bessel_i_scaled(1, x, ctl) / x;
}

namespace detail {

inline SeriesSum hyp1f2_sum(double a, double b1, double b2, double x, const SeriesControl& ctl) {
  require_finite(a, "hyp1f2");
  require_finite(b1, "hyp1f2");
  require_finite(b2, "hyp1f2");
  require_finite(x, "hyp1f2");
  if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2))
    throw DomainError("hyp1f2: lower parameters must not be zero or a negative integer");
  ctl.validate();

  SeriesStop stop(ctl);
  double term = 1.0;
  for (std::size_t m = 0;; ++m) {
    const double md = static_cast<double>(m);
    const double ratio = (a + md) / ((b1 + md) * (b2 + md) * (md + 1.0)) * x;
    // No Pochhammer factor changes sign after this point.
    const bool settled = a + md > 0.0 && b1 + md > 0.0 && b2 + md > 0.0;
    if (stop.add(term, settled && std::abs(ratio) < 0.5)) {
      return {stop.sum(), stop.abs_sum(), 2.0 * std::abs(term * ratio), stop.terms()};
    }
    if (stop.exhausted()) stop.fail("hyp1f2");
    term *= ratio;
  }
}

}  // namespace detail

/// Generalized hypergeometric function 1F2(a; b1, b2; x).
inline double hyp1f2(double a, double b1, double b2, double x, const SeriesControl& ctl = {}) {
  return detail::hyp1f2_sum(a, b1, b2, x, ctl).value;
}

/// ln C(n, k) via log-gamma; -infinity when k lies outside [0, n].
inline double log_binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

}  // namespace altbd
