#pragma once

// Reference engines used to check the closed forms: uniformization of a
// truncated generator, Monte Carlo paths, and Euler-summation Laplace
// inversion. None of these share code with the series evaluators.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "altbd/errors.hpp"
#include "altbd/rates.hpp"

namespace altbd {

enum class ChainKind { bilateral, reflected };

inline const char* to_string(ChainKind kind) {
  return kind == ChainKind::bilateral ? "bilateral" : "reflected";
}

/// Inclusive range of states [lo, hi].
struct StateWindow {
  State lo;
  State hi;

  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
  bool contains(State s) const { return s >= lo && s <= hi; }
};

/// One of the two chains restricted to a window. Jumps leaving the window are
/// lost, so the restricted generator is sub-stochastic at the edges.
struct TruncatedChain {
  ChainKind kind;
  Rates rates;
  StateWindow window;

  TruncatedChain(ChainKind k, const Rates& r, StateWindow w) : kind(k), rates(r), window(w) {
    if (w.hi < w.lo) throw DomainError("TruncatedChain: empty window");
    if (k == ChainKind::reflected && w.lo < 0)
      throw DomainError("TruncatedChain: reflected chain lives on non-negative states");
  }

  double up_rate(State s) const { return rates.out_of(s); }
  double down_rate(State s) const {
    if (kind == ChainKind::reflected && s == 0) return 0.0;
    return rates.out_of(s);
  }
  double exit_rate(State s) const { return up_rate(s) + down_rate(s); }
};

/// Probability mass function on consecutive states starting at `lo`.
struct Distribution {
  State lo = 0;
  std::vector<double> p;

  State hi() const { return lo + static_cast<State>(p.size()) - 1; }

  double at(State n) const {
    if (n < lo || n > hi()) return 0.0;
    return p[static_cast<std::size_t>(n - lo)];
  }

  double total() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
  }

  double mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += static_cast<double>(lo + static_cast<State>(i)) * p[i];
    return s;
  }

  double second_moment() const {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double n = static_cast<double>(lo + static_cast<State>(i));
      s += n * n * p[i];
    }
    return s;
  }

  /// Central second moment, summed around the mean to avoid cancellation.
  double variance() const {
    const double m = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = static_cast<double>(lo + static_cast<State>(i)) - m;
      s += d * d * p[i];
    }
    return s;
  }
};

/// Transient distribution of `chain` at time t from state k by uniformization
/// with rate 2 max(lambda, mu). Poisson terms are taken until the tail is
/// below eps/2; throws WindowTooSmall when more than eps/2 of the mass
/// leaves the window.
inline Distribution uniformize(const TruncatedChain& chain, State k, double t, double eps = 1e-13) {
  require_time(t, "uniformize");
  if (!(eps > 0.0)) throw DomainError("uniformize: eps must be positive");
  if (!chain.window.contains(k)) throw DomainError("uniformize: initial state outside the window");

  const std::size_t size = chain.window.size();
  const State lo = chain.window.lo;
  Distribution out{lo, std::vector<double>(size, 0.0)};
  std::vector<double> v(size, 0.0);
  v[static_cast<std::size_t>(k - lo)] = 1.0;
  if (t == 0.0) {
    out.p = v;
    return out;
  }

  const double rate = 2.0 * chain.rates.max();
  const double lt = rate * t;
  std::vector<double> up(size), down(size), stay(size);
  for (std::size_t i = 0; i < size; ++i) {
    const State s = lo + static_cast<State>(i);
    up[i] = chain.up_rate(s) / rate;
    down[i] = chain.down_rate(s) / rate;
    stay[i] = 1.0 - up[i] - down[i];
  }

  std::vector<double> next(size);
  double lost = 0.0;  // mass pushed across the window edges so far
  for (std::size_t n = 0;; ++n) {
    const double nd = static_cast<double>(n);
    const double log_w = -lt + nd * std::log(lt) - std::lgamma(nd + 1.0);
    const double w = std::exp(log_w);
    for (std::size_t i = 0; i < size; ++i) out.p[i] += w * v[i];

    // Tail beyond n is at most w_{n+1} / (1 - lt/(n+2)) once n+2 > lt.
    if (nd + 2.0 > lt) {
      const double next_w = w * lt / (nd + 1.0);
      if (next_w / (1.0 - lt / (nd + 2.0)) < 0.5 * eps) break;
    }

    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < size; ++i) {
      const double m = v[i];
      if (m == 0.0) continue;
      next[i] += m * stay[i];
      if (i + 1 < size) next[i + 1] += m * up[i];
      else lost += m * up[i];
      if (i > 0) next[i - 1] += m * down[i];
      else lost += m * down[i];
    }
    v.swap(next);
    // Mass lost by step n can only reduce later iterates; the Poisson mixture
    // sees at most `lost` of it.
    if (lost > 0.5 * eps) throw WindowTooSmall("uniformize: window too small", lost);
  }
  return out;
}

/// k +- ceil(Lt + 10 sqrt(Lt) + 20) with L = 2 max(lambda, mu); clipped at 0
/// for the reflected chain.
inline StateWindow default_window(ChainKind kind, const Rates& r, State k, double t) {
  const double lt = 2.0 * r.max() * t;
  const auto margin = static_cast<State>(std::ceil(lt + 10.0 * std::sqrt(lt) + 20.0));
  StateWindow w{k - margin, k + margin};
  if (kind == ChainKind::reflected) w.lo = 0;
  return w;
}

/// uniformize() on the default window, doubling the margin on WindowTooSmall.
inline Distribution transient_distribution(ChainKind kind, const Rates& r, State k, double t,
                                           double eps = 1e-13) {
  if (kind == ChainKind::reflected && k < 0)
    throw DomainError("transient_distribution: reflected chain starts at k >= 0");
  StateWindow w = default_window(kind, r, k, t);
  for (int attempt = 0;; ++attempt) {
    try {
      return uniformize(TruncatedChain(kind, r, w), k, t, eps);
    } catch (const WindowTooSmall&) {
      if (attempt >= 6) throw;
      const State margin = 2 * (w.hi - k);
      w = {kind == ChainKind::reflected ? 0 : k - margin, k + margin};
    }
  }
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

struct SimConfig {
  std::size_t paths = 100'000;
  double horizon = 1.0;
  std::uint64_t seed = 1;
  unsigned threads = 0;  ///< 0: hardware concurrency

  void validate() const {
    if (paths < 1) throw DomainError("SimConfig: paths must be at least 1");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
      throw DomainError("SimConfig: horizon must be positive and finite");
  }
};

/// Empirical summary at one sample time.
struct SimPoint {
  double t = 0.0;
  Distribution pmf;          ///< relative frequencies over [min, max] visited state
  std::vector<double> se;    ///< sqrt(p(1-p)/paths) per entry of pmf
  double mean = 0.0;
  double mean_se = 0.0;
  double variance = 0.0;     ///< sample variance (divisor paths)
  double variance_se = 0.0;  ///< sqrt((m4 - variance^2)/paths)
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Uniform on [0, 1) from the top 53 bits; independent of library
/// distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

/// States of one path at each (sorted) sample time.
inline void simulate_path(ChainKind kind, const Rates& r, State k, const std::vector<double>& times,
                          std::mt19937_64& rng, State* out) {
  State s = k;
  double clock = 0.0;
  std::size_t next = 0;
  while (next < times.size()) {
    const bool pinned = kind == ChainKind::reflected && s == 0;
    const double rate = pinned ? r.lambda : 2.0 * r.out_of(s);
    clock += -std::log1p(-uniform01(rng)) / rate;
    while (next < times.size() && times[next] < clock) out[next++] = s;
    if (next == times.size()) break;
    if (pinned) s = 1;
    else s += uniform01(rng) < 0.5 ? -1 : 1;
  }
}

}  // namespace detail

/// Monte Carlo estimate of the state distribution at each sample time.
///
/// Replicate i draws from mt19937_64 seeded with splitmix64(seed ^ splitmix64(i)),
/// so results depend only on (inputs, seed), not on the thread count.
inline std::vector<SimPoint> simulate(ChainKind kind, const Rates& r, State k, const SimConfig& cfg,
                                      const std::vector<double>& times) {
  cfg.validate();
  if (kind == ChainKind::reflected && k < 0) throw DomainError("simulate: reflected chain starts at k >= 0");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || times[i] > cfg.horizon)
      throw DomainError("simulate: sample times must lie in [0, horizon]");
    if (i > 0 && times[i] < times[i - 1]) throw DomainError("simulate: sample times must be sorted");
  }

  const std::size_t nt = times.size();
  const std::size_t paths = cfg.paths;
  std::vector<State> states(paths * nt);
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, paths));

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::mt19937_64 rng(detail::splitmix64(cfg.seed ^ detail::splitmix64(i)));
      detail::simulate_path(kind, r, k, times, rng, states.data() + i * nt);
    }
  };
  if (workers <= 1) {
    run(0, paths);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (paths + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(paths, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  // Aggregation in replicate order.
  std::vector<SimPoint> out(nt);
  const double n = static_cast<double>(paths);
  for (std::size_t j = 0; j < nt; ++j) {
    State lo = std::numeric_limits<State>::max();
    State hi = std::numeric_limits<State>::min();
    double sum = 0.0;
    for (std::size_t i = 0; i < paths; ++i) {
      const State s = states[i * nt + j];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      sum += static_cast<double>(s);
    }
    SimPoint& pt = out[j];
    pt.t = times[j];
    pt.mean = sum / n;
    std::vector<std::size_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
    double m2 = 0.0;
    double m4 = 0.0;
    for (std::size_t i = 0; i < paths; ++i) {
      const State s = states[i * nt + j];
      ++counts[static_cast<std::size_t>(s - lo)];
      const double d = static_cast<double>(s) - pt.mean;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    pt.variance = m2;
    pt.mean_se = std::sqrt(m2 / n);
    pt.variance_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    pt.pmf.lo = lo;
    pt.pmf.p.resize(counts.size());
    pt.se.resize(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) {
      const double p = static_cast<double>(counts[c]) / n;
      pt.pmf.p[c] = p;
      pt.se[c] = std::sqrt(p * (1.0 - p) / n);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Laplace inversion
// ---------------------------------------------------------------------------

/// Parameters of the Euler-summed Fourier series inversion: contour shift A
/// (discretization error about e^{-A}), N terms before averaging, M binomial
/// averaging terms.
struct EulerConfig {
  double contour = 25.0;
  int terms = 30;
  int euler_terms = 15;
};

/// f(t) from its transform F, which must accept std::complex<double> and be
/// analytic for Re s > 0.
template <class F>
double invert_laplace(const F& transform, double t, const EulerConfig& cfg = {}) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("invert_laplace: t must be positive");
  if (cfg.terms < 1 || cfg.euler_terms < 0) throw DomainError("invert_laplace: bad term counts");
  using C = std::complex<double>;
  const double a = cfg.contour;
  const int total = cfg.terms + cfg.euler_terms;

  std::vector<double> partial(static_cast<std::size_t>(total) + 1);
  double acc = 0.5 * std::real(C(transform(C(a / (2.0 * t), 0.0))));
  partial[0] = acc;
  for (int k = 1; k <= total; ++k) {
    const C s(a / (2.0 * t), k * std::numbers::pi / t);
    const double term = std::real(C(transform(s)));
    acc += (k % 2 == 0) ? term : -term;
    partial[static_cast<std::size_t>(k)] = acc;
  }

  const int m = cfg.euler_terms;
  double avg = 0.0;
  double binom = 1.0;  // C(m, j)
  for (int j = 0; j <= m; ++j) {
    avg += binom * partial[static_cast<std::size_t>(cfg.terms + j)];
    binom = binom * (m - j) / (j + 1);
  }
  avg = std::ldexp(avg, -m);
  return std::exp(0.5 * a) / t * avg;
}

}  // namespace altbd
