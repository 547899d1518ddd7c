// Command-line harness for the generalized Orlicz laboratory: assumption
// certification, convergence studies of the smoothed difference quotient,
// norm evaluation, and report re-rendering.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "orlicz/experiment.hpp"
#include "orlicz/modular.hpp"
#include "orlicz/report_io.hpp"
#include "orlicz/rng.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> grid_h;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config JSON")->required();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--out", args.out_dir, "override the output directory");
  cmd->add_option("--grid-h", args.grid_h, "override the grid spacing (refinement sweeps)");
}

orlicz::ExperimentConfig load_with_overrides(const CommonArgs& args) {
  auto cfg = orlicz::ExperimentConfig::load(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.out_dir) cfg.out_dir = *args.out_dir;
  if (args.grid_h) cfg.grid_h = *args.grid_h;
  return cfg;
}

/// Monte Carlo mean of |x . e_1| over the unit ball, rejection sampled.
std::pair<double, double> mc_mean_abs_x1(int dim, std::int64_t n, std::uint64_t seed) {
  orlicz::Rng rng(seed);
  double sum = 0.0, sum2 = 0.0;
  std::int64_t accepted = 0;
  while (accepted < n) {
    double r2 = 0.0;
    double x0 = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double x = rng.uniform(-1.0, 1.0);
      if (d == 0) x0 = x;
      r2 += x * x;
    }
    if (r2 >= 1.0) continue;
    const double v = std::abs(x0);
    sum += v;
    sum2 += v * v;
    ++accepted;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sum2 / static_cast<double>(n) - mean * mean;
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized Orlicz laboratory"};
  app.require_subcommand(1);

  CommonArgs converge_args, certify_args, norm_args;
  auto* converge = app.add_subcommand("converge", "run a convergence study along the kernel schedule");
  add_common(converge, converge_args);
  auto* certify = app.add_subcommand("certify", "run the assumption certifiers for the configured model");
  add_common(certify, certify_args);
  auto* norm = app.add_subcommand("norm", "evaluate the modular and Luxemburg norm of the configured function");
  add_common(norm, norm_args);

  int cn_dim = 1;
  std::int64_t cn_samples = 1000000;
  auto* cn_cmd = app.add_subcommand("c-n", "print the gradient scaling constant");
  cn_cmd->add_option("--dim", cn_dim, "dimension")->required();
  cn_cmd->add_option("--mc-samples", cn_samples, "Monte Carlo cross-check sample count");

  std::string report_input, report_out = "out";
  auto* report = app.add_subcommand("report", "re-render CSV/SVG from a stored convergence report");
  report->add_option("--input", report_input, "report.json path")->required();
  report->add_option("--out", report_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : orlicz::exit_config_error;
  }

  try {
    if (converge->parsed()) return orlicz::run_experiment(load_with_overrides(converge_args), std::cout);
    if (certify->parsed()) return orlicz::run_certify(load_with_overrides(certify_args), std::cout);
    if (norm->parsed()) {
      auto cfg = load_with_overrides(norm_args);
      auto setup = orlicz::build_setup(cfg);
      const auto mod = orlicz::modular(setup.model, setup.field);
      const double lux = orlicz::luxemburg_norm(setup.model, setup.field, cfg.norm_tol);
      std::cout << "modular " << orlicz::fmt_g(mod.value()) << "\n";
      std::cout << "luxemburg_norm " << orlicz::fmt_g(lux) << "\n";
      if (norm_args.out_dir) {
        orlicz::detail::ensure_dir(*norm_args.out_dir);
        orlicz::write_field_csv(setup.field, *norm_args.out_dir + "/field.csv");
        std::cout << "field written to " << *norm_args.out_dir << "/field.csv\n";
      }
      return orlicz::exit_ok;
    }
    if (cn_cmd->parsed()) {
      const double closed = orlicz::c_n(cn_dim);
      const auto [mc, se] = mc_mean_abs_x1(cn_dim, cn_samples, 12345);
      std::cout << "c_n closed form " << orlicz::fmt_g(closed) << "\n";
      std::cout << "monte carlo " << orlicz::fmt_g(mc) << " +- " << orlicz::fmt_g(se) << "\n";
      return std::abs(mc - closed) <= 4 * se ? orlicz::exit_ok : orlicz::exit_inconclusive;
    }
    if (report->parsed()) return orlicz::rerender_report(report_input, report_out, std::cout);
  } catch (const orlicz::input_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return orlicz::exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return orlicz::exit_config_error;
  }
  return orlicz::exit_config_error;
}
