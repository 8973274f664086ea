// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. argv[1] is the path to the altbd tool.

#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "altbd/bilateral.hpp"
#include "altbd/oracle.hpp"
#include "altbd/verify.hpp"

using namespace altbd;
using verify::CheckResult;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed()) return false;
    return !checks.empty();
  }
};

void report(const Criterion& c) {
  std::cout << "criterion " << c.id << ": " << (c.passed() ? "PASS" : "FAIL") << "  " << c.title << '\n';
  for (const auto& k : c.checks) {
    std::cout << "    " << (k.passed() ? "ok  " : "FAIL") << ' ' << k.name << "  max_residual=" << k.max_residual
              << " tol=" << k.tolerance;
    if (!k.error.empty()) std::cout << "  error: " << k.error;
    std::cout << '\n';
  }
}

struct CommandResult {
  int status = -1;
  std::string out;
};

CommandResult run(const std::string& cmd) {
  CommandResult r;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe.release());
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::cout.precision(3);
  const std::string cli = argc > 1 ? argv[1] : "altbd";

  verify::Grid grid;
  grid.rates = {{1.0, 2.0}, {2.0, 2.0}, {2.0, 1.0}, {0.5, 3.0}};
  const verify::Checker chk(grid);
  std::vector<Criterion> all;

  all.push_back({1, "normalization of the transition probabilities", {chk.normalization(1e-9)}});

  {
    auto sym = chk.symmetry(1e-12);
    all.push_back({2, "symmetry relations", sym});
    // the rate-swapped transpose read literally on equal-parity pairs is false
    // (reversibility keeps the rates there); shown for information only
    const auto literal = verify::run_check("info_transpose_equal_parity_literal", 0.0, [&](auto note) {
      for (const auto& r : grid.rates)
        for (double t : grid.times) note(chk.prob(2, 0, t, r) - chk.prob(0, 2, t, r.swapped()));
    });
    std::cout << "info: literal rate-swapped transpose on equal-parity pairs, max residual "
              << literal.max_residual << " (not a criterion)\n";
  }

  all.push_back({3, "lambda = mu reduces to e^{-2 lambda t} I_|n|(2 lambda t)", {chk.bessel_reduction(1e-10)}});

  all.push_back({4, "series vs uniformization; Chapman-Kolmogorov",
                 {chk.bilateral_vs_oracle(1e-9), chk.chapman_kolmogorov(1e-8)}});

  {
    Criterion c{5, "bilateral mean and variance (closed form, truncated sums, uniformization, Monte Carlo)",
                {chk.bilateral_moments(1e-8)}};
    c.checks.push_back(verify::run_check("monte_carlo_within_4_se", 4.0, [&](auto note) {
      SimConfig cfg;
      cfg.paths = 100'000;
      cfg.horizon = 2.0;
      cfg.seed = 20240601;
      for (const auto& r : grid.rates)
        for (State k : {State{0}, State{1}}) {
          for (const auto& pt : simulate(ChainKind::bilateral, r, k, cfg, {0.5, 1.0, 2.0})) {
            note((pt.mean - mean(k, pt.t, r)) / pt.mean_se);
            note((pt.variance - variance(k, pt.t, r)) / pt.variance_se);
          }
        }
    }));
    all.push_back(c);
  }

  all.push_back({6, "reflected q00, q10 vs uniformization; q10 triple agreement; rate ordering",
                 {chk.q00_vs_oracle(1e-7), chk.q10_vs_oracle(1e-7), chk.q10_triple(1e-6), chk.q10_rate_ordering()}});

  {
    verify::Grid g;
    const verify::Checker c7(g);
    all.push_back({7, "Laplace-domain roots, linear system and total mass", c7.laplace_roots_checks()});
  }

  all.push_back({8, "reflected mean/variance vs uniformization; P_k ODE residual",
                 {chk.reflected_moments(1e-6), chk.p_even_ode(1e-6)}});

  all.push_back({9, "no steady state: q00(100) < 0.1 and eventual decrease", chk.decay()});

  {
    Criterion c{10, "simulate output byte-identical for a fixed seed; verify exits 0", {}};
    const std::string sim = cli + " simulate --lambda 1 --mu 2 --from 0 --t 0:2:5 --paths 100000 --seed 11";
    const auto a = run(sim);
    const auto b = run(sim);
    c.checks.push_back(verify::run_check("simulate_byte_identical", 0.0, [&](auto note) {
      note(a.status == 0 && b.status == 0 && !a.out.empty() && a.out == b.out ? 0.0 : 1.0);
    }));
    const auto v = run(cli + " verify 2>/dev/null");
    c.checks.push_back(verify::run_check("verify_exit_status", 0.0, [&](auto note) { note(v.status); }));
    all.push_back(c);
  }

  int failed = 0;
  for (const auto& c : all) {
    report(c);
    if (!c.passed()) ++failed;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (all.size() - failed) << "/" << all.size() << '\n';
  return failed ? 1 : 0;
}
