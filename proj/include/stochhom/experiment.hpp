#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochhom/montecarlo.hpp"

namespace stochhom {

inline constexpr const char* kVersion = "0.1.0";

enum class TestCase { tc1, tc2, tc3, custom };
std::string_view to_string(TestCase tc);

/// Experiment description. Sizes are given as 2N; the cell is
/// Q_N = (-N/2, N/2)^2 with N^2 unit cells.
struct ExperimentConfig {
  TestCase test_case = TestCase::custom;
  double p = 4.0;
  int d = 2;
  Vec2 xi = Vec2(1.0, 1.0);
  std::vector<int> sizes = {10, 20, 40};
  int samples_2m = 100;
  double mesh_h = 0.2;
  double newton_tol = 1e-5;
  std::uint64_t seed = 0;
  Distribution dist_a = Distribution::bernoulli(3.0, 23.0);
  Distribution dist_c = Distribution::constant(0.0);
  std::filesystem::path output_dir = "results";

  /// Defaults for one of the three reference cases (custom behaves as tc1).
  static ExperimentConfig for_test_case(TestCase tc);
  void validate() const;
  FieldSetup field_setup(int two_n) const;
};

class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" text. Entries are separated by newlines or by
/// top-level commas; '#' starts a comment. Unknown or repeated keys and
/// invariant violations raise ConfigError naming the field.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::filesystem::path& path);

struct SizeResult {
  int two_n = 0;
  int half_width = 0;
  SampleSet mc;
  SampleSet av;
  ComparisonReport report;
  double wall_seconds = 0.0;
};

struct ExperimentResults {
  ExperimentConfig config;
  std::vector<SizeResult> sizes;
};

struct RunSettings {
  int threads = 1;
  bool emit_plots = false;
  bool write_files = true;
};

/// For each size: run_mc(2M) and run_av(M), compare, and write
/// results.csv and manifest.json (plus plot series when requested) into
/// config.output_dir. Solver failures surface as RealizationError.
ExperimentResults run_experiment(const ExperimentConfig& config, const RunSettings& settings = {});

inline constexpr const char* kCsvHeader = "quantity,two_n,mc_mean,mc_var,mc_ci,av_mean,av_var,av_ci,v_mc,v_av,ratio";

std::string results_csv(const ExperimentResults& results);
std::string manifest_json(const ExperimentResults& results, const RunSettings& settings);

/// Writes plots/variance_<q>.dat and plots/mean_<q>.dat for each quantity.
/// Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const ExperimentResults& results,
                                                  const std::filesystem::path& dir);

/// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

}  // namespace stochhom
