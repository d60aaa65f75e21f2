// Experiment runner: MC versus antithetic estimation of apparent homogenized
// quantities. See README.md for the config format.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "stochhom/experiment.hpp"

using namespace stochhom;

namespace {

int run_command(const std::string& config_path, const std::optional<std::string>& output_dir,
                const std::optional<std::uint64_t>& seed, int threads, bool emit_plots) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config(config_path);
    if (output_dir) cfg.output_dir = *output_dir;
    if (seed) cfg.seed = *seed;
    if (threads < 1) throw ConfigError("--threads", "must be >= 1");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  RunSettings settings;
  settings.threads = threads;
  settings.emit_plots = emit_plots;
  try {
    const auto results = run_experiment(cfg, settings);
    for (const auto& size : results.sizes) {
      std::cout << "2N = " << size.two_n << "  (" << size.mc.solve_count() << " + " << size.av.solve_count()
                << " corrector solves, " << size.wall_seconds << " s)\n";
      for (Quantity q : kAllQuantities) {
        const auto& c = size.report[q];
        std::cout << "  " << to_string(q) << ": R = " << c.ratio << "  [" << c.ratio_ci_low << ", "
                  << c.ratio_ci_high << "]\n";
      }
    }
    std::cout << "wrote " << (cfg.output_dir / "results.csv").string() << '\n';
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

int dump_field_command(const std::string& test_case, int two_n, std::uint64_t seed, std::uint64_t realization,
                       bool anti) {
  try {
    auto cfg = parse_config_text("test_case = " + test_case);
    if (two_n < 2 || two_n % 2) throw ConfigError("--two-n", "must be even and >= 2");
    const int n = two_n / 2;
    auto draws = draw_uniforms(seed, realization, static_cast<std::size_t>(n) * n);
    if (anti) draws = antithetic(draws);
    realize_field(cfg.dist_a, cfg.dist_c, draws, n, 2).dump(std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Antithetic-variable estimation of apparent homogenized energy densities"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an MC / AV comparison experiment from a config file");
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool emit_plots = false;
  run->add_option("config", config_path, "Config file (key = value lines)")->required();
  run->add_option("--output-dir", output_dir, "Override output_dir from the config");
  run->add_option("--seed", seed, "Override seed from the config");
  run->add_option("--threads", threads, "Worker threads (results do not depend on this)");
  run->add_flag("--emit-plots", emit_plots, "Also write per-quantity plot series");

  auto* dump = app.add_subcommand("dump-field", "Print one coefficient field as 'k1 k2 a c' rows");
  std::string test_case = "tc1";
  int two_n = 10;
  std::uint64_t dump_seed = 0, realization = 0;
  bool anti = false;
  dump->add_option("--test-case", test_case, "tc1, tc2, tc3");
  dump->add_option("--two-n", two_n, "Domain size 2N");
  dump->add_option("--seed", dump_seed, "Seed");
  dump->add_option("--realization", realization, "Realization index");
  dump->add_flag("--antithetic", anti, "Use the antithetic draws 1 - U");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return run_command(config_path, output_dir, seed, threads, emit_plots);
  if (*dump) return dump_field_command(test_case, two_n, dump_seed, realization, anti);
  return kExitConfig;
}
