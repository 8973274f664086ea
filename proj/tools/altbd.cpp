// altbd: CSV tables for the alternating-rate birth-death process.
//
// exit codes: 0 ok, 2 usage, 3 numeric failure, 4 verification failure

#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "altbd/commands.hpp"

namespace {

using altbd::cli::RunConfig;

struct Sub {
  CLI::App* app;
  void (*run)(const RunConfig&, std::ostream&);
};

void add_rates(CLI::App* sub, RunConfig& c) {
  sub->add_option("--lambda", c.lambda, "rate out of even states")->required()->check(CLI::PositiveNumber);
  sub->add_option("--mu", c.mu, "rate out of odd states")->required()->check(CLI::PositiveNumber);
}

void add_grid(CLI::App* sub, RunConfig& c) {
  sub->add_option("--t", c.time_spec, "time grid start:stop:count (inclusive)")->required();
}

void add_series(CLI::App* sub, RunConfig& c) {
  sub->add_option("--tol", c.ctl.rel_tol, "series relative tolerance")->capture_default_str();
  sub->add_option("--max-terms", c.ctl.max_terms, "series term cap")->capture_default_str();
}

void add_process(CLI::App* sub, RunConfig& c) {
  const std::map<std::string, altbd::ChainKind> kinds{{"bilateral", altbd::ChainKind::bilateral},
                                                     {"reflected", altbd::ChainKind::reflected}};
  sub->add_option("--process", c.process, "bilateral|reflected")
      ->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient probabilities of the alternating-rate birth-death process"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  std::string out_path;
  app.add_option("--out", out_path, "write CSV here instead of stdout");

  std::vector<Sub> subs;

  auto* prob = app.add_subcommand("prob", "p_{from,to}(t) of the bilateral chain");
  add_rates(prob, c);
  add_grid(prob, c);
  add_series(prob, c);
  prob->add_option("--from", c.from)->required();
  prob->add_option("--to", c.to)->required();
  subs.push_back({prob, altbd::cli::cmd_prob});

  auto* pgf = app.add_subcommand("pgf", "even/odd generating functions at z");
  add_rates(pgf, c);
  add_grid(pgf, c);
  pgf->add_option("--from", c.from)->required();
  pgf->add_option("--z", c.z)->required()->check(CLI::PositiveNumber);
  subs.push_back({pgf, altbd::cli::cmd_pgf});

  auto* moments = app.add_subcommand("moments", "mean and variance");
  add_rates(moments, c);
  add_grid(moments, c);
  add_series(moments, c);
  add_process(moments, c);
  moments->add_option("--from", c.from)->required();
  subs.push_back({moments, altbd::cli::cmd_moments});

  auto* reflect = app.add_subcommand("reflect", "q_{from,to}(t) of the reflected chain");
  add_rates(reflect, c);
  add_grid(reflect, c);
  add_series(reflect, c);
  reflect->add_option("--from", c.from)->capture_default_str();
  reflect->add_option("--to", c.to)->capture_default_str();
  reflect->add_option("--method", c.method, "series|integral|laplace|oracle")->capture_default_str();
  subs.push_back({reflect, altbd::cli::cmd_reflect});

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo state frequencies");
  add_rates(simulate, c);
  add_grid(simulate, c);
  add_process(simulate, c);
  simulate->add_option("--from", c.from)->required();
  simulate->add_option("--seed", c.seed)->capture_default_str();
  simulate->add_option("--paths", c.paths)->capture_default_str()->check(CLI::PositiveNumber);
  subs.push_back({simulate, altbd::cli::cmd_simulate});

  auto* verify = app.add_subcommand("verify", "run all invariant checks");
  add_series(verify, c);
  verify->add_option("--mutate-offset", c.mutate_offset)->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::unique_ptr<std::ofstream> file;
  std::ostream* out = &std::cout;
  try {
    if (!verify->parsed()) {
      c.times = altbd::cli::parse_time_grid(c.time_spec);
      (void)c.rates();
    }
    c.ctl.validate();
    if (!out_path.empty()) {
      file = std::make_unique<std::ofstream>(out_path);
      if (!*file) throw altbd::cli::UsageError("cannot open --out file '" + out_path + "'");
      out = file.get();
    }
  } catch (const std::exception& e) {
    std::cerr << "altbd: " << e.what() << '\n';
    return 2;
  }

  try {
    if (verify->parsed()) return altbd::cli::cmd_verify(c, *out, std::cerr) ? 0 : 4;
    for (const auto& s : subs)
      if (s.app->parsed()) s.run(c, *out);
    out->flush();
  } catch (const altbd::cli::UsageError& e) {
    std::cerr << "altbd: " << e.what() << '\n';
    return 2;
  } catch (const altbd::DomainError& e) {
    std::cerr << "altbd: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "altbd: numeric failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
