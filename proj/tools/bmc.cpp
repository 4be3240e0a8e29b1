// Command-line driver: single-point estimates, grid sweeps and figure data.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "bmc/run.hpp"

namespace {

struct ExampleFlags {
  std::string example = "ex1";
  std::string params;
  std::map<std::string, double> named;

  void add_to(CLI::App& app) {
    app.add_option("--example", example, "ex1, ex2, ex3, ex3-three or ex4")->required();
    app.add_option("--params", params, "key=value list, e.g. n=17,a=2.5,b=12.5,c=501.5,d=500");
    for (const char* key : {"a", "b", "c", "d", "n", "m"}) {
      app.add_option_function<double>(std::string("--") + key,
                                      [this, key](double v) { named[key] = v; },
                                      std::string("example parameter ") + key);
    }
  }

  bmc::ExampleConfig config() const {
    auto all = bmc::parse_params(params);
    for (const auto& [k, v] : named) all[k] = v;
    return bmc::make_example_config(example, all);
  }
};

struct CommonFlags {
  std::string methods = "exact";
  Eigen::Index T = 10000;
  std::uint64_t seed = 42;
  Eigen::Index burn_in = 0;
  std::string out;

  void add_to(CLI::App& app) {
    app.add_option("--methods", methods, "comma list of exact,scott,congdon,gibbs,coupled");
    app.add_option("--T", T, "draws per estimate");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--burn-in", burn_in, "Gibbs burn-in sweeps");
    app.add_option("--out", out, "CSV output path");
  }
};

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void print_estimates(const bmc::RunConfig& config, double y,
                     const std::vector<bmc::EstimateResult>& results) {
  const auto set = bmc::build_example(config.example);
  const Eigen::VectorXd exact = bmc::exact_posterior_probs(set, y);
  std::cout << "example " << set.label() << "  y = " << y << "  T = " << config.T
            << "  seed = " << config.seed << '\n';
  for (const auto& r : results) {
    std::cout << "  " << bmc::to_string(r.method) << ':';
    for (Eigen::Index k = 0; k < r.probs.size(); ++k) {
      std::cout << "  p" << k + 1 << " = " << number(r.probs(k));
      if (r.method != bmc::Method::Exact) std::cout << " (se " << number(r.stderrs(k)) << ')';
    }
    if (r.method != bmc::Method::Exact) {
      std::cout << "  |p1 - exact| = " << number(std::abs(r.probs(0) - exact(0)));
    }
    if (r.dropped_rows > 0) std::cout << "  dropped " << r.dropped_rows;
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior model probability estimators compared against exact answers"};
  app.set_version_flag("--version", std::string("bmc ") + bmc::kToolVersion);
  app.require_subcommand(1);

  ExampleFlags est_example;
  CommonFlags est_common;
  double y = 0.0;
  auto* estimate = app.add_subcommand("estimate", "estimates at one observation");
  est_example.add_to(*estimate);
  est_common.add_to(*estimate);
  estimate->add_option("--y", y, "observation")->required();

  ExampleFlags sweep_example;
  CommonFlags sweep_common;
  std::string grid;
  unsigned jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "P(M=1|y) over a grid of observations, as CSV");
  sweep_example.add_to(*sweep);
  sweep_common.add_to(*sweep);
  sweep->add_option("--grid", grid, "min:max:count (default: the example's figure range)");
  sweep->add_option("--jobs", jobs, "worker threads (0 = hardware concurrency)");

  std::string fig_dir = "figures";
  std::uint64_t fig_seed = bmc::kFigureSeed;
  Eigen::Index fig_T = 0;
  unsigned fig_jobs = 0;
  auto* figures = app.add_subcommand("figures", "write one CSV per figure panel");
  figures->add_option("--out", fig_dir, "output directory");
  figures->add_option("--seed", fig_seed, "master seed");
  figures->add_option("--T", fig_T, "override every panel's draw count");
  figures->add_option("--jobs", fig_jobs, "worker threads (0 = hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*estimate) {
      bmc::RunConfig config;
      config.example = est_example.config();
      config.methods = bmc::parse_methods(est_common.methods);
      config.T = est_common.T;
      config.seed = est_common.seed;
      config.burn_in = est_common.burn_in;
      config.y_values = {y};
      bmc::validate(config);
      const auto results = bmc::run_estimate(config, y);
      print_estimates(config, y, results);
      if (!est_common.out.empty()) bmc::write_csv(est_common.out, bmc::run_sweep(config));
    } else if (*sweep) {
      bmc::RunConfig config;
      config.example = sweep_example.config();
      config.methods = bmc::parse_methods(sweep_common.methods);
      config.T = sweep_common.T;
      config.seed = sweep_common.seed;
      config.burn_in = sweep_common.burn_in;
      config.jobs = jobs;
      config.default_grid = grid.empty();
      config.y_values = grid.empty() ? bmc::default_grid(config.example) : bmc::parse_grid(grid);
      const auto table = bmc::run_sweep(config);
      if (sweep_common.out.empty()) {
        bmc::write_csv(std::cout, table);
      } else {
        bmc::write_csv(sweep_common.out, table);
      }
    } else if (*figures) {
      for (const auto& p : bmc::write_figures(fig_dir, fig_seed, fig_T, fig_jobs)) {
        std::cout << p.string() << '\n';
      }
    }
  } catch (const bmc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
