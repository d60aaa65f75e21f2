#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stochhom/experiment.hpp"

using namespace stochhom;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("stochhom_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ExperimentConfig small(TestCase tc, const fs::path& out) {
  auto cfg = ExperimentConfig::for_test_case(tc);
  cfg.sizes = {2, 4};
  cfg.samples_2m = 8;
  cfg.mesh_h = 0.5;
  cfg.seed = 3;
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("parse_config: minimal file fills defaults") {
  const auto cfg = parse_config_text("test_case = tc1, seed = 42");
  CHECK(cfg.test_case == TestCase::tc1);
  CHECK(cfg.seed == 42);
  CHECK(cfg.p == 4.0);
  CHECK(cfg.d == 2);
  CHECK(cfg.xi == Vec2(1, 1));
  CHECK(cfg.sizes == std::vector<int>{10, 20, 40});
  CHECK(cfg.samples_2m == 100);
  CHECK(cfg.mesh_h == 0.2);
  CHECK(cfg.newton_tol == 1e-5);
  CHECK(cfg.dist_a == Distribution::bernoulli(3, 23));
  CHECK(cfg.dist_c == Distribution::constant(0));
}

TEST_CASE("parse_config: test-case defaults for c") {
  CHECK(parse_config_text("test_case = tc2").dist_c == Distribution::constant(1));
  CHECK(parse_config_text("test_case = tc3").dist_c == Distribution::bernoulli(1, 3));
  CHECK(parse_config_text("test_case = tc3\ndist_c = constant(2)").dist_c == Distribution::constant(2));
}

TEST_CASE("parse_config: overrides and comments") {
  const auto cfg = parse_config_text(
      "# experiment\n"
      "test_case = tc3\n"
      "sizes = [10, 20]   # two sizes\n"
      "xi = [1.0, -0.5]\n"
      "p = 3.5, samples_2m = 40\n"
      "mesh_h = 0.25\n"
      "dist_a = bernoulli(2, 5)\n"
      "output_dir = \"out dir\"\n");
  CHECK(cfg.sizes == std::vector<int>{10, 20});
  CHECK(cfg.xi == Vec2(1.0, -0.5));
  CHECK(cfg.p == 3.5);
  CHECK(cfg.samples_2m == 40);
  CHECK(cfg.mesh_h == 0.25);
  CHECK(cfg.dist_a == Distribution::bernoulli(2, 5));
  CHECK(cfg.output_dir == fs::path("out dir"));
}

TEST_CASE("parse_config: field-level rejections") {
  auto field_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  CHECK(field_of("mesh_h = 0.3") == "mesh_h");
  CHECK(field_of("sizes = [10, 15]") == "sizes");
  CHECK(field_of("sizes = [0]") == "sizes");
  CHECK(field_of("colour = blue") == "colour");
  CHECK(field_of("seed = 1\nseed = 2") == "seed");
  CHECK(field_of("p = 1.5") == "p");
  CHECK(field_of("p = four") == "p");
  CHECK(field_of("d = 3") == "d");
  CHECK(field_of("samples_2m = 7") == "samples_2m");
  CHECK(field_of("test_case = tc9") == "test_case");
  CHECK(field_of("dist_a = bernoulli(0, 3)") == "dist_a");
  CHECK(field_of("dist_c = uniform(0, 1)") == "dist_c");
  CHECK(field_of("xi = [1]") == "xi");
  CHECK(field_of("just words") == "");
  CHECK_THROWS_AS(parse_config("/nonexistent/stochhom.cfg"), ConfigError);
}

TEST_CASE("run_experiment: CSV schema, manifest and determinism") {
  const auto dir = scratch("csv");
  const auto cfg = small(TestCase::tc1, dir);
  const auto results = run_experiment(cfg);
  const std::string csv = slurp(dir / "results.csv");
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == kCsvHeader);
  int rows = 0;
  for (std::string row; std::getline(lines, row);) {
    ++rows;
    CHECK(std::count(row.begin(), row.end(), ',') == 10);
  }
  CHECK(rows == 8 * 2);

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["seed"] == 3);
  CHECK(manifest["config"]["test_case"] == "tc1");
  CHECK(manifest["sizes"].size() == 2);
  CHECK(manifest["sizes"][0]["solves"].size() == 16);
  CHECK(manifest["sizes"][0]["corrector_solves"]["mc"] == manifest["sizes"][0]["corrector_solves"]["av"]);
  CHECK(manifest["sizes"][0].contains("newton_iterations"));

  const auto dir2 = scratch("csv2");
  auto cfg2 = cfg;
  cfg2.output_dir = dir2;
  RunSettings threaded;
  threaded.threads = 3;
  run_experiment(cfg2, threaded);
  CHECK(slurp(dir2 / "results.csv") == csv);
  CHECK(results_csv(results) == csv);
}

TEST_CASE("emit_plot_data: eight variance and eight mean series") {
  const auto dir = scratch("plots");
  RunSettings settings;
  settings.emit_plots = true;
  run_experiment(small(TestCase::tc2, dir), settings);
  int variance = 0, mean = 0;
  for (const auto& entry : fs::directory_iterator(dir / "plots")) {
    const auto name = entry.path().filename().string();
    variance += name.rfind("variance_", 0) == 0;
    mean += name.rfind("mean_", 0) == 0;
  }
  CHECK(variance == 8);
  CHECK(mean == 8);
  const std::string series = slurp(dir / "plots" / "variance_value.dat");
  CHECK(series.rfind("# two_n cell_measure v_mc v_av zero_variance\n2 1 ", 0) == 0);
}

TEST_CASE("emit_plot_data: degenerate law is flagged") {
  auto cfg = small(TestCase::custom, scratch("flat"));
  cfg.dist_a = Distribution::constant(4);
  RunSettings settings;
  settings.write_files = false;
  const auto results = run_experiment(cfg, settings);
  const auto files = emit_plot_data(results, cfg.output_dir);
  CHECK(files.size() == 16);
  std::istringstream in(slurp(cfg.output_dir / "variance_value.dat"));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) CHECK(line.back() == '1');
}

TEST_CASE("run_experiment: unwritable output is an I/O error") {
  const auto blocker = scratch("blocker");
  std::ofstream(blocker.string()) << "x";
  auto cfg = small(TestCase::tc1, blocker / "sub");
  CHECK_THROWS_AS(run_experiment(cfg), IoError);
  fs::remove(blocker);
}
