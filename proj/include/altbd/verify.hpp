#pragma once

// Invariant checks shared by the `verify` command and the acceptance runner.
// Each check reports its largest residual against a fixed tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "altbd/bilateral.hpp"
#include "altbd/oracle.hpp"
#include "altbd/reflecting.hpp"
#include "altbd/specfun.hpp"

namespace altbd::verify {

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::string error;  ///< set when the check threw

  bool passed() const { return error.empty() && max_residual <= tolerance; }
};

/// Evaluates `body`, which accumulates residuals through `note`, and turns any
/// exception into a failed result.
inline CheckResult run_check(std::string name, double tol,
                             const std::function<void(const std::function<void(double)>&)>& body) {
  CheckResult res{std::move(name), 0.0, tol, {}};
  try {
    body([&](double r) {
      if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
      res.max_residual = std::max(res.max_residual, std::abs(r));
    });
  } catch (const std::exception& e) {
    res.error = e.what();
    res.max_residual = std::numeric_limits<double>::infinity();
  }
  return res;
}

struct Grid {
  std::vector<Rates> rates{{1.0, 2.0}, {2.0, 2.0}, {2.0, 1.0}};
  std::vector<State> starts{-3, -2, -1, 0, 1, 2, 3};
  std::vector<double> times{0.1, 0.5, 1.0, 2.0, 5.0};
  SeriesControl ctl{};
  detail::ProbVariant variant{};
};

class Checker {
 public:
  explicit Checker(Grid grid) : g_(std::move(grid)) {}

  const Grid& grid() const { return g_; }

  double prob(State k, State n, double t, const Rates& r) const {
    return detail::transition_prob({k, n, t}, r, g_.ctl, g_.variant);
  }

  /// Half-width of a window around k whose Poisson(2 max(lambda,mu) t) tail
  /// is far below 1e-12.
  static State margin(const Rates& r, double t) {
    const auto w = default_window(ChainKind::bilateral, r, 0, t);
    return w.hi;
  }

  // ---- bilateral -------------------------------------------------------

  CheckResult normalization(double tol = 1e-9) const {
    return run_check("normalization", tol, [&](auto note) {
      for (const auto& r : g_.rates)
        for (double t : g_.times)
          for (State k : g_.starts) {
            const State m = margin(r, t);
            double s = 0.0;
            for (State n = k - m; n <= k + m; ++n) s += prob(k, n, t, r);
            note(s - 1.0);
          }
    });
  }

  /// The five clauses relating p under reflection/translation by N and rate
  /// swap, plus p_{k,k+r} = p_{k,k-r}.
  std::vector<CheckResult> symmetry(double tol = 1e-12) const {
    const std::vector<State> shifts{-3, -2, -1, 1, 2, 3};
    auto clause = [&](std::string name, auto lhs_rhs) {
      return run_check(std::move(name), tol, [&](auto note) {
        for (const auto& r : g_.rates)
          for (double t : g_.times)
            for (State k : g_.starts)
              for (State n = k - 3; n <= k + 3; ++n) lhs_rhs(note, r, t, k, n);
      });
    };
    std::vector<CheckResult> out;
    out.push_back(clause("symmetry_reflect_even", [&](auto note, const Rates& r, double t, State k, State n) {
      for (State N : shifts)
        if (is_even(N)) note(prob(N - k, N - n, t, r) - prob(k, n, t, r));
    }));
    out.push_back(clause("symmetry_reflect_odd", [&](auto note, const Rates& r, double t, State k, State n) {
      for (State N : shifts)
        if (!is_even(N)) note(prob(N - k, N - n, t, r) - prob(k, n, t, r.swapped()));
    }));
    // The rate swap under transposition applies across parities only; for
    // k, n of equal parity reversibility gives p_{n,k} = p_{k,n} at the same rates.
    out.push_back(clause("symmetry_transpose", [&](auto note, const Rates& r, double t, State k, State n) {
      if (is_even(k) != is_even(n)) note(prob(n, k, t, r) - prob(k, n, t, r.swapped()));
      else note(prob(n, k, t, r) - prob(k, n, t, r));
    }));
    out.push_back(clause("symmetry_shift_even", [&](auto note, const Rates& r, double t, State k, State n) {
      for (State N : shifts)
        if (is_even(N)) note(prob(N + k, N + n, t, r) - prob(k, n, t, r));
    }));
    out.push_back(clause("symmetry_shift_odd", [&](auto note, const Rates& r, double t, State k, State n) {
      for (State N : shifts)
        if (!is_even(N)) note(prob(N + k, N + n, t, r) - prob(k, n, t, r.swapped()));
    }));
    out.push_back(clause("symmetry_parity_reflection", [&](auto note, const Rates& r, double t, State k, State n) {
      note(prob(k, k + (n - k), t, r) - prob(k, k - (n - k), t, r));
    }));
    out.push_back(run_check("symmetry_transpose_instance", tol, [&](auto note) {
      for (double t : g_.times) note(prob(-2, 1, t, {1.0, 2.0}) - prob(1, -2, t, {2.0, 1.0}));
    }));
    return out;
  }

  CheckResult chapman_kolmogorov(double tol = 1e-8) const {
    return run_check("chapman_kolmogorov", tol, [&](auto note) {
      const std::vector<double> steps{0.3, 0.7};
      for (const auto& r : g_.rates)
        for (double t : steps)
          for (double s : steps)
            for (State k : {State{0}, State{1}})
              for (State n = k - 3; n <= k + 3; ++n) {
                const State m = margin(r, t + s);
                double sum = 0.0;
                for (State j = k - m; j <= k + m; ++j) sum += prob(k, j, t, r) * prob(j, n, s, r);
                note(sum - prob(k, n, t + s, r));
              }
    });
  }

  /// lambda = mu: p_{0,n}(t) = e^{-2 lambda t} I_|n|(2 lambda t).
  CheckResult bessel_reduction(double tol = 1e-10) const {
    return run_check("bessel_reduction", tol, [&](auto note) {
      for (double lam : {0.5, 1.0, 2.0})
        for (double t : {0.1, 0.5, 1.0, 2.0, 3.5, 5.0})
          for (State n = -10; n <= 10; ++n) {
            const double want = bessel_i_scaled(static_cast<int>(std::abs(n)), 2.0 * lam * t);
            note(prob(0, n, t, {lam, lam}) - want);
          }
    });
  }

  CheckResult bilateral_vs_oracle(double tol = 1e-9) const {
    return run_check("bilateral_vs_uniformization", tol, [&](auto note) {
      for (const auto& r : g_.rates)
        for (double t : g_.times)
          for (State k : g_.starts) {
            const auto d = transient_distribution(ChainKind::bilateral, r, k, t);
            for (State n = d.lo; n <= d.hi(); ++n) {
              const double ref = d.at(n);
              if (std::abs(n - k) > 12 && ref < 1e-14) continue;
              note(prob(k, n, t, r) - ref);
            }
          }
    });
  }

  /// Closed-form variance against the truncated-sum second moment of the
  /// series and against uniformization.
  CheckResult bilateral_moments(double tol = 1e-8) const {
    return run_check("bilateral_moments", tol, [&](auto note) {
      for (const auto& r : g_.rates)
        for (double t : g_.times)
          for (State k : g_.starts) {
            note(mean(k, t, r) - static_cast<double>(k));
            const State m = margin(r, t);
            double m1 = 0.0;
            double c2 = 0.0;
            for (State n = k - m; n <= k + m; ++n) {
              const double p = prob(k, n, t, r);
              m1 += static_cast<double>(n - k) * p;
              c2 += static_cast<double>((n - k) * (n - k)) * p;
            }
            const double v = variance(k, t, r);
            note(c2 - m1 * m1 - v);
            note(transient_distribution(ChainKind::bilateral, r, k, t).variance() - v);
          }
    });
  }

  // ---- reflected -------------------------------------------------------

  static const std::vector<Rates>& reference_rates() {
    static const std::vector<Rates> r{{1.0, 2.0}, {2.0, 2.0}, {2.0, 1.0}};
    return r;
  }

  CheckResult q00_vs_oracle(double tol = 1e-7) const {
    return run_check("q00_vs_uniformization", tol, [&](auto note) {
      for (const auto& r : reference_rates())
        for (double t : {0.25, 0.5, 1.0, 2.0, 5.0})
          note(q00(t, r, g_.ctl) - transient_distribution(ChainKind::reflected, r, 0, t).at(0));
    });
  }

  CheckResult q10_vs_oracle(double tol = 1e-7) const {
    return run_check("q10_series_vs_uniformization", tol, [&](auto note) {
      for (const auto& r : reference_rates())
        for (double t : {0.25, 0.5, 1.0, 2.0, 5.0})
          note(q10_series(t, r, g_.ctl) - transient_distribution(ChainKind::reflected, r, 1, t).at(0));
    });
  }

  /// series = integral = Laplace inversion of pi_{1,0}.
  CheckResult q10_triple(double tol = 1e-6) const {
    return run_check("q10_triple_agreement", tol, [&](auto note) {
      for (const auto& r : reference_rates())
        for (double t : {0.25, 0.5, 1.0, 2.0, 5.0}) {
          const double series = q10_series(t, r, g_.ctl);
          const double integral = q10_integral(t, r);
          const double inverted =
              invert_laplace([&](std::complex<double> s) { return pi_1n_at(s, 0, r); }, t);
          note(series - integral);
          note(series - inverted);
          note(integral - inverted);
        }
    });
  }

  /// q10 curves ordered (1,2) >= (2,2) >= (2,1) on (0, 5]. Residual is the
  /// largest violation.
  CheckResult q10_rate_ordering() const {
    return run_check("q10_rate_ordering", 0.0, [&](auto note) {
      const auto& r = reference_rates();
      for (int i = 1; i <= 100; ++i) {
        const double t = 0.05 * i;
        const double top = q10_series(t, r[0], g_.ctl);
        const double mid = q10_series(t, r[1], g_.ctl);
        const double bottom = q10_series(t, r[2], g_.ctl);
        note(std::max(0.0, mid - top));
        note(std::max(0.0, bottom - mid));
      }
    });
  }

  std::vector<CheckResult> laplace_roots_checks() const {
    const std::vector<double> ss{0.1, 1.0, 10.0};
    std::vector<CheckResult> out;
    out.push_back(run_check("psi_product", 1e-12, [&](auto note) {
      for (const auto& r : g_.rates)
        for (double s : ss) {
          const auto lr = laplace_roots(s, r);
          note(lr.psi1_sq * lr.psi2_sq - 1.0);
        }
    }));
    out.push_back(run_check("psi_bounds", 0.0, [&](auto note) {
      for (const auto& r : g_.rates)
        for (double s : ss) {
          const auto lr = laplace_roots(s, r);
          note(lr.psi1_sq > 1.0 ? 0.0 : 1.0);
          note(lr.psi2_sq > 0.0 && lr.psi2_sq < 1.0 ? 0.0 : 1.0);
        }
    }));
    out.push_back(run_check("biquadratic_residual", 1e-10, [&](auto note) {
      for (const auto& r : g_.rates)
        for (double s : ss) {
          const auto lr = laplace_roots(s, r);
          const double lm = r.lambda * r.mu;
          const double mid = (r.lambda + r.mu + s) * (r.lambda + r.mu + s) - r.lambda * r.lambda - r.mu * r.mu;
          for (double x : {lr.psi1_sq, lr.psi2_sq}) note((lm * x * x - mid * x + lm) / std::max(1.0, mid * x));
        }
    }));
    out.push_back(run_check("laplace_system_residual", 1e-10, [&](auto note) {
      for (const auto& r : g_.rates)
        for (double s : ss) note(laplace_system_residuals(s, r, 20).max());
    }));
    out.push_back(run_check("laplace_total_mass", 1e-8, [&](auto note) {
      for (const auto& r : g_.rates)
        for (double s : {0.1, 0.5, 1.0, 2.0, 10.0}) note(pi_total(s, r) - 1.0 / s);
    }));
    return out;
  }

  static double pi_total(double s, const Rates& r) {
    double sum = 0.0;
    for (std::int64_t n = 0; n < 100'000; ++n) {
      const double term = pi_1n(s, n, r);
      sum += term;
      if (n > 2 && term < 1e-18 * sum) return sum;
    }
    throw ConvergenceError("pi_total: no convergence", sum, 100'000);
  }

  CheckResult laplace_inversion(double tol = 1e-6) const {
    return run_check("laplace_inversion_vs_uniformization", tol, [&](auto note) {
      for (const auto& r : g_.rates)
        for (double t : {0.5, 1.0, 2.0}) {
          const auto d = transient_distribution(ChainKind::reflected, r, 1, t);
          for (std::int64_t n = 0; n <= 6; ++n) {
            const double f =
                invert_laplace([&](std::complex<double> s) { return pi_1n_at(s, n, r); }, t);
            note(f - d.at(n));
          }
        }
    });
  }

  CheckResult reflected_moments(double tol = 1e-6) const {
    return run_check("reflected_moments_vs_uniformization", tol, [&](auto note) {
      for (const auto& r : reference_rates())
        for (State k : {State{0}, State{1}})
          for (double t : {0.5, 1.0, 2.0, 5.0}) {
            const auto d = transient_distribution(ChainKind::reflected, r, k, t);
            note(r_mean(k, t, r, g_.ctl) - d.mean());
            note(r_variance(k, t, r, g_.ctl) - d.variance());
          }
    });
  }

  /// Central differences of P_k against its ODE, and 0 <= P_k <= 1.
  CheckResult p_even_ode(double tol = 1e-6) const {
    return run_check("p_even_ode_residual", tol, [&](auto note) {
      const double h = 1e-4;
      for (const auto& r : reference_rates())
        for (State k : {State{0}, State{1}}) {
          const auto q = zero_state_probability(k, r, g_.ctl);
          const double a = r.lambda + r.mu;
          for (double t : {0.25, 0.5, 1.0, 2.0, 5.0}) {
            const double p = p_even(k, t, r, q);
            const double dp = (p_even(k, t + h, r, q) - p_even(k, t - h, r, q)) / (2.0 * h);
            note(dp + 2.0 * a * p - r.lambda * q(t) - 2.0 * r.mu);
            if (p < 0.0 || p > 1.0) note(std::numeric_limits<double>::infinity());
          }
        }
    });
  }

  /// q00(100) < 0.1, and q00 decreasing after its last local maximum on a
  /// grid of [0, 100].
  std::vector<CheckResult> decay() const {
    std::vector<CheckResult> out;
    out.push_back(run_check("q00_at_100", 0.1, [&](auto note) {
      for (const auto& r : reference_rates()) note(q00(100.0, r, g_.ctl));
    }));
    out.push_back(run_check("q00_eventually_decreasing", 0.0, [&](auto note) {
      for (const auto& r : reference_rates()) {
        std::vector<double> q;
        for (int i = 0; i <= 200; ++i) q.push_back(q00(0.5 * i, r, g_.ctl));
        std::size_t last_max = 0;
        for (std::size_t i = 1; i + 1 < q.size(); ++i)
          if (q[i] >= q[i - 1] && q[i] >= q[i + 1]) last_max = i;
        for (std::size_t i = last_max + 1; i < q.size(); ++i) note(std::max(0.0, q[i] - q[i - 1]));
      }
    }));
    return out;
  }

 private:
  Grid g_;
};

/// Every check on the given grid.
inline std::vector<CheckResult> run_all(const Grid& grid) {
  const Checker c(grid);
  std::vector<CheckResult> out;
  auto add = [&](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };
  out.push_back(c.normalization());
  add(c.symmetry());
  out.push_back(c.chapman_kolmogorov());
  out.push_back(c.bessel_reduction());
  out.push_back(c.bilateral_vs_oracle());
  out.push_back(c.bilateral_moments());
  out.push_back(c.q00_vs_oracle());
  out.push_back(c.q10_vs_oracle());
  out.push_back(c.q10_triple());
  out.push_back(c.q10_rate_ordering());
  add(c.laplace_roots_checks());
  out.push_back(c.laplace_inversion());
  out.push_back(c.reflected_moments());
  out.push_back(c.p_even_ode());
  add(c.decay());
  return out;
}

}  // namespace altbd::verify
