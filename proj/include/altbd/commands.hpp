#pragma once

// Subcommand bodies for the altbd tool. Each writes a CSV table to `out`.

#include <charconv>
#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "altbd/bilateral.hpp"
#include "altbd/csv.hpp"
#include "altbd/oracle.hpp"
#include "altbd/reflecting.hpp"
#include "altbd/verify.hpp"

namespace altbd::cli {

/// Invalid command-line input (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inclusive grid "start:stop:count".
inline std::vector<double> parse_time_grid(std::string_view spec) {
  auto fail = [&] { return UsageError("--t expects start:stop:count, got '" + std::string(spec) + "'"); };
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw fail();
  auto num = [&](std::string_view s, auto& v) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw fail();
  };
  double start = 0.0;
  double stop = 0.0;
  long long count = 0;
  num(spec.substr(0, c1), start);
  num(spec.substr(c1 + 1, c2 - c1 - 1), stop);
  num(spec.substr(c2 + 1), count);
  if (!std::isfinite(start) || !std::isfinite(stop) || start < 0.0 || count < 1)
    throw UsageError("--t: need finite start >= 0 and count >= 1");
  if (count == 1) {
    if (stop != start) throw UsageError("--t: count 1 needs start == stop");
    return {start};
  }
  if (!(stop > start)) throw UsageError("--t: grid must be strictly increasing");
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (long long i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = start + step * static_cast<double>(i);
  grid.back() = stop;
  return grid;
}

struct RunConfig {
  double lambda = 1.0;
  double mu = 2.0;
  State from = 0;
  State to = 0;
  std::vector<double> times{0.0};
  std::string time_spec = "0:0:1";
  double z = 1.0;
  SeriesControl ctl{};
  std::uint64_t seed = 1;
  std::size_t paths = 100'000;
  ChainKind process = ChainKind::bilateral;
  std::string method = "series";
  std::int64_t mutate_offset = 0;  ///< nonzero: verify with the mutated inner-sum offset

  Rates rates() const { return {lambda, mu}; }
};

inline void write_common_meta(csv::Writer& w, std::string_view command, const RunConfig& c) {
  w.meta("command", command).meta("lambda", c.lambda).meta("mu", c.mu).meta("t", c.time_spec);
}

inline void cmd_prob(const RunConfig& c, std::ostream& out) {
  const Rates r = c.rates();
  csv::Writer w(out);
  write_common_meta(w, "prob", c);
  w.meta("from", c.from).meta("to", c.to).meta("tol", c.ctl.rel_tol);
  w.header({"t", "p"});
  for (double t : c.times) w.row(t, transition_prob({c.from, c.to, t}, r, c.ctl));
}

inline void cmd_pgf(const RunConfig& c, std::ostream& out) {
  const Rates r = c.rates();
  csv::Writer w(out);
  write_common_meta(w, "pgf", c);
  w.meta("from", c.from).meta("z", c.z);
  w.header({"t", "f", "g", "total"});
  for (double t : c.times) {
    const auto v = pgf(c.from, c.z, t, r);
    w.row(t, v.f, v.g, v.total());
  }
}

inline void cmd_moments(const RunConfig& c, std::ostream& out) {
  const Rates r = c.rates();
  csv::Writer w(out);
  write_common_meta(w, "moments", c);
  w.meta("process", to_string(c.process)).meta("from", c.from);
  w.header({"t", "mean", "variance"});
  if (c.process == ChainKind::bilateral) {
    for (double t : c.times) w.row(t, mean(c.from, t, r), variance(c.from, t, r));
    return;
  }
  if (c.from != 0 && c.from != 1) throw UsageError("moments: reflected process needs --from 0 or 1");
  for (double t : c.times) w.row(t, r_mean(c.from, t, r, c.ctl), r_variance(c.from, t, r, c.ctl));
}

/// q_{from,to}(t) for the reflected chain.
///   series, integral: to = 0, from in {0, 1}
///   laplace:          from = 1, any to >= 0
///   oracle:           uniformization, any from, to >= 0
inline void cmd_reflect(const RunConfig& c, std::ostream& out) {
  const Rates r = c.rates();
  if (c.from < 0 || c.to < 0) throw UsageError("reflect: states must be non-negative");
  const std::string& m = c.method;
  if ((m == "series" || m == "integral") && (c.to != 0 || (c.from != 0 && c.from != 1)))
    throw UsageError("reflect: --method " + m + " needs --from 0|1 and --to 0");
  if (m == "laplace" && c.from != 1) throw UsageError("reflect: --method laplace needs --from 1");
  if (m != "series" && m != "integral" && m != "laplace" && m != "oracle")
    throw UsageError("reflect: unknown --method '" + m + "'");

  csv::Writer w(out);
  write_common_meta(w, "reflect", c);
  w.meta("from", c.from).meta("to", c.to).meta("method", m);
  w.header({"t", "q"});
  for (double t : c.times) {
    double q = 0.0;
    if (m == "series") {
      q = c.from == 0 ? q00(t, r, c.ctl) : q10_series(t, r, c.ctl);
    } else if (m == "integral") {
      q = c.from == 0 ? q00_integral(t, r, 1e-10, c.ctl) : q10_integral(t, r, 1e-10, c.ctl);
    } else if (m == "laplace") {
      q = t == 0.0 ? (c.to == 1 ? 1.0 : 0.0)
                   : invert_laplace([&](std::complex<double> s) { return pi_1n_at(s, c.to, r); }, t);
    } else {
      q = transient_distribution(ChainKind::reflected, r, c.from, t).at(c.to);
    }
    w.row(t, q);
  }
}

inline void cmd_simulate(const RunConfig& c, std::ostream& out) {
  const Rates r = c.rates();
  SimConfig cfg;
  cfg.paths = c.paths;
  cfg.seed = c.seed;
  cfg.horizon = std::max(c.times.back(), 1e-300);
  const auto points = simulate(c.process, r, c.from, cfg, c.times);
  csv::Writer w(out);
  write_common_meta(w, "simulate", c);
  w.meta("process", to_string(c.process)).meta("from", c.from).meta("paths", c.paths).meta("seed", c.seed);
  w.header({"t", "state", "empirical_p", "std_err"});
  for (const auto& pt : points)
    for (std::size_t i = 0; i < pt.pmf.p.size(); ++i) {
      if (pt.pmf.p[i] == 0.0) continue;
      w.row(pt.t, pt.pmf.lo + static_cast<State>(i), pt.pmf.p[i], pt.se[i]);
    }
}

/// Runs every check; CSV to `out`, a readable summary to `err`. Returns true
/// when all checks pass.
inline bool cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  verify::Grid grid;
  grid.ctl = c.ctl;
  grid.variant.swap_offset = c.mutate_offset != 0;
  const auto results = verify::run_all(grid);

  csv::Writer w(out);
  w.meta("command", "verify");
  if (grid.variant.swap_offset) w.meta("mutation", "swap_offset");
  w.header({"check", "max_residual", "tolerance", "status"});
  std::size_t failed = 0;
  for (const auto& res : results) {
    w.row(res.name, res.max_residual, res.tolerance, res.passed() ? "pass" : "FAIL");
    if (!res.passed()) ++failed;
  }
  for (const auto& res : results) {
    err << (res.passed() ? "  ok    " : "  FAIL  ") << res.name << "  residual " << csv::format(res.max_residual)
        << " (tol " << csv::format(res.tolerance) << ")";
    if (!res.error.empty()) err << "  error: " << res.error;
    err << '\n';
  }
  err << (failed ? std::to_string(failed) + " of " : "all ") << results.size() << " checks "
      << (failed ? "failed" : "passed") << '\n';
  return failed == 0;
}

}  // namespace altbd::cli
