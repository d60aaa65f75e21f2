#include "stochhom/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Core>
#include <json.hpp>

namespace stochhom {

std::string_view to_string(TestCase tc) {
  switch (tc) {
    case TestCase::tc1: return "tc1";
    case TestCase::tc2: return "tc2";
    case TestCase::tc3: return "tc3";
    case TestCase::custom: return "custom";
  }
  return "unknown";
}

ExperimentConfig ExperimentConfig::for_test_case(TestCase tc) {
  ExperimentConfig cfg;
  cfg.test_case = tc;
  cfg.dist_a = Distribution::bernoulli(3.0, 23.0);
  switch (tc) {
    case TestCase::tc1:
    case TestCase::custom: cfg.dist_c = Distribution::constant(0.0); break;
    case TestCase::tc2: cfg.dist_c = Distribution::constant(1.0); break;
    case TestCase::tc3: cfg.dist_c = Distribution::bernoulli(1.0, 3.0); break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (!(p >= 2.0) || !std::isfinite(p)) throw ConfigError("p", "must be >= 2");
  if (d != 2) throw ConfigError("d", "only d = 2 is supported");
  if (!xi.allFinite()) throw ConfigError("xi", "must be finite");
  if (sizes.empty()) throw ConfigError("sizes", "must list at least one size");
  for (int s : sizes)
    if (s < 2 || s % 2 != 0) throw ConfigError("sizes", "every size 2N must be even and >= 2, got " + std::to_string(s));
  if (samples_2m < 4 || samples_2m % 2 != 0)
    throw ConfigError("samples_2m", "must be even and >= 4, got " + std::to_string(samples_2m));
  const double inv = 1.0 / mesh_h;
  if (!(mesh_h > 0.0 && mesh_h <= 1.0) || std::abs(inv - std::round(inv)) > 1e-9 * inv)
    throw ConfigError("mesh_h", "1/h must be a positive integer, got h = " + std::to_string(mesh_h));
  if (!(newton_tol > 0.0)) throw ConfigError("newton_tol", "must be > 0");
  if (!(dist_a.min_value() > 0.0)) throw ConfigError("dist_a", "values must be > 0");
  if (!(dist_c.min_value() >= 0.0)) throw ConfigError("dist_c", "values must be >= 0");
}

FieldSetup ExperimentConfig::field_setup(int two_n) const {
  FieldSetup setup;
  setup.dist_a = dist_a;
  setup.dist_c = dist_c;
  setup.p = p;
  setup.xi = xi;
  setup.half_width = two_n / 2;
  setup.mesh_h = mesh_h;
  setup.newton.tol = newton_tol;
  return setup;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Splits on commas that are not nested in () or [].
std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (ch == sep && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

long long parse_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

std::vector<std::string> parse_list(const std::string& key, const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ConfigError(key, "expected a list like [1, 2], got '" + v + "'");
  const std::string inner = trim(v.substr(1, v.size() - 2));
  std::vector<std::string> items;
  if (inner.empty()) return items;
  for (auto& item : split_top_level(inner, ',')) items.push_back(trim(item));
  return items;
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
    return v.substr(1, v.size() - 2);
  return v;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  static const std::set<std::string> known = {"test_case", "p",    "d",     "xi",     "sizes",  "samples_2m",
                                              "mesh_h",    "newton_tol", "seed", "dist_a", "dist_c", "output_dir"};
  std::map<std::string, std::string> entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (const auto& raw : split_top_level(line, ',')) {
      const std::string entry = trim(raw);
      if (entry.empty()) continue;
      const auto eq = entry.find('=');
      if (eq == std::string::npos)
        throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value', got '" + entry + "'");
      const std::string key = trim(entry.substr(0, eq));
      const std::string value = trim(entry.substr(eq + 1));
      if (!known.count(key)) throw ConfigError(key, "unknown key");
      if (value.empty()) throw ConfigError(key, "missing value");
      if (!entries.emplace(key, value).second) throw ConfigError(key, "given more than once");
    }
  }

  TestCase tc = TestCase::custom;
  if (auto it = entries.find("test_case"); it != entries.end()) {
    const std::string v = unquote(it->second);
    if (v == "tc1") tc = TestCase::tc1;
    else if (v == "tc2") tc = TestCase::tc2;
    else if (v == "tc3") tc = TestCase::tc3;
    else if (v == "custom") tc = TestCase::custom;
    else throw ConfigError("test_case", "expected one of tc1, tc2, tc3, custom; got '" + v + "'");
  }
  ExperimentConfig cfg = ExperimentConfig::for_test_case(tc);

  for (const auto& [key, value] : entries) {
    if (key == "test_case") continue;
    if (key == "p") cfg.p = parse_real(key, value);
    else if (key == "d") cfg.d = static_cast<int>(parse_integer(key, value));
    else if (key == "xi") {
      const auto items = parse_list(key, value);
      if (items.size() != 2) throw ConfigError(key, "expected two components");
      cfg.xi = Vec2(parse_real(key, items[0]), parse_real(key, items[1]));
    } else if (key == "sizes") {
      cfg.sizes.clear();
      for (const auto& item : parse_list(key, value)) cfg.sizes.push_back(static_cast<int>(parse_integer(key, item)));
    } else if (key == "samples_2m") cfg.samples_2m = static_cast<int>(parse_integer(key, value));
    else if (key == "mesh_h") cfg.mesh_h = parse_real(key, value);
    else if (key == "newton_tol") cfg.newton_tol = parse_real(key, value);
    else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) throw ConfigError(key, "must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "dist_a" || key == "dist_c") {
      try {
        (key == "dist_a" ? cfg.dist_a : cfg.dist_c) = Distribution::parse(unquote(value));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(key, e.what());
      }
    } else if (key == "output_dir") cfg.output_dir = unquote(value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return fmt_double(v);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string results_csv(const ExperimentResults& results) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& size : results.sizes) {
    for (Quantity q : kAllQuantities) {
      const auto& c = size.report[q];
      out << to_string(q) << ',' << size.two_n << ',' << fmt_double(c.mc.mean) << ',' << fmt_double(c.mc.variance)
          << ',' << fmt_double(c.mc.ci_halfwidth) << ',' << fmt_double(c.av.mean) << ','
          << fmt_double(c.av.variance) << ',' << fmt_double(c.av.ci_halfwidth) << ',' << fmt_double(c.v_mc) << ','
          << fmt_double(c.v_av) << ',' << fmt_double(c.ratio) << '\n';
    }
  }
  return out.str();
}

std::string manifest_json(const ExperimentResults& results, const RunSettings& settings) {
  using nlohmann::json;
  const auto& cfg = results.config;
  json j;
  j["version"] = kVersion;
  j["versions"] = {{"stochhom", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
#ifdef __VERSION__
                   {"compiler", __VERSION__},
#endif
                   {"cxx_standard", static_cast<long>(__cplusplus)}};
  j["determinism_note"] =
      "results.csv is a pure function of the config and seed on a given platform; other compilers or "
      "math libraries may differ in the last bits";
  j["seed"] = cfg.seed;
  j["threads"] = settings.threads;
  j["config"] = {{"test_case", std::string(to_string(cfg.test_case))},
                 {"p", cfg.p},
                 {"d", cfg.d},
                 {"xi", {cfg.xi[0], cfg.xi[1]}},
                 {"sizes", cfg.sizes},
                 {"samples_2m", cfg.samples_2m},
                 {"mesh_h", cfg.mesh_h},
                 {"newton_tol", cfg.newton_tol},
                 {"seed", cfg.seed},
                 {"dist_a", cfg.dist_a.to_string()},
                 {"dist_c", cfg.dist_c.to_string()},
                 {"output_dir", cfg.output_dir.string()}};

  json sizes = json::array();
  for (const auto& size : results.sizes) {
    json s;
    s["two_n"] = size.two_n;
    s["half_width"] = size.half_width;
    s["wall_seconds"] = size.wall_seconds;
    s["corrector_solves"] = {{"mc", size.mc.solve_count()}, {"av", size.av.solve_count()}};
    json ratios = json::object();
    for (Quantity q : kAllQuantities) {
      const auto& c = size.report[q];
      ratios[std::string(to_string(q))] = {{"ratio", json_number(c.ratio)},
                                           {"ratio_defined", c.ratio_defined},
                                           {"bootstrap_ci", {json_number(c.ratio_ci_low), json_number(c.ratio_ci_high)}}};
    }
    s["ratios"] = ratios;

    std::vector<int> iterations;
    auto logs = [&](const SampleSet& set, const char* arm) {
      json arr = json::array();
      for (const auto& rec : set.solves) {
        iterations.push_back(rec.log.newton_iterations);
        arr.push_back({{"arm", arm},
                       {"realization", rec.realization},
                       {"antithetic", rec.antithetic},
                       {"iterations", rec.log.newton_iterations},
                       {"increments", rec.log.increments},
                       {"final_residual", rec.log.final_residual},
                       {"halvings", rec.log.halvings},
                       {"regularized", rec.log.regularized},
                       {"linear_iterations", rec.log.linear_iterations},
                       {"wall_seconds", rec.log.wall_seconds}});
      }
      return arr;
    };
    json solves = logs(size.mc, "mc");
    for (auto& rec : logs(size.av, "av")) solves.push_back(rec);
    s["solves"] = solves;
    if (!iterations.empty()) {
      std::sort(iterations.begin(), iterations.end());
      s["newton_iterations"] = {{"min", iterations.front()},
                                {"median", iterations[iterations.size() / 2]},
                                {"max", iterations.back()}};
    }
    sizes.push_back(s);
  }
  j["sizes"] = sizes;
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_plot_data(const ExperimentResults& results, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  for (Quantity q : kAllQuantities) {
    std::ostringstream var, mean;
    var << "# two_n cell_measure v_mc v_av zero_variance\n";
    mean << "# two_n cell_measure mc_mean mc_ci av_mean av_ci\n";
    for (const auto& size : results.sizes) {
      const auto& c = size.report[q];
      const double measure = static_cast<double>(size.half_width) * size.half_width;
      const bool zero = !(c.v_mc > 0.0) || !(c.v_av > 0.0);
      var << size.two_n << ' ' << fmt_double(measure) << ' ' << fmt_double(c.v_mc) << ' ' << fmt_double(c.v_av) << ' '
          << (zero ? 1 : 0) << '\n';
      mean << size.two_n << ' ' << fmt_double(measure) << ' ' << fmt_double(c.mc.mean) << ' '
           << fmt_double(c.mc.ci_halfwidth) << ' ' << fmt_double(c.av.mean) << ' ' << fmt_double(c.av.ci_halfwidth)
           << '\n';
    }
    const auto var_path = dir / ("variance_" + std::string(to_string(q)) + ".dat");
    const auto mean_path = dir / ("mean_" + std::string(to_string(q)) + ".dat");
    write_file(var_path, var.str());
    write_file(mean_path, mean.str());
    written.push_back(var_path);
    written.push_back(mean_path);
  }
  return written;
}

ExperimentResults run_experiment(const ExperimentConfig& config, const RunSettings& settings) {
  config.validate();
  ExperimentResults results;
  results.config = config;

  if (settings.write_files) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + config.output_dir.string() + "': " + ec.message());
  }

  const std::size_t two_m = static_cast<std::size_t>(config.samples_2m);
  for (int two_n : config.sizes) {
    const auto started = std::chrono::steady_clock::now();
    const FieldSetup setup = config.field_setup(two_n);
    const Sampler sampler = make_field_sampler(setup);
    RunOptions options;
    options.seed = config.seed;
    options.n_cells = field_cell_count(setup);
    options.threads = settings.threads;

    SizeResult size;
    size.two_n = two_n;
    size.half_width = setup.half_width;
    size.mc = run_mc(sampler, two_m, options);
    size.av = run_av(sampler, two_m / 2, options);
    size.report = compare(size.mc, size.av, 1000, config.seed * 1000003ULL + static_cast<std::uint64_t>(two_n));
    size.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    results.sizes.push_back(std::move(size));
  }

  if (settings.write_files) {
    write_file(config.output_dir / "results.csv", results_csv(results));
    write_file(config.output_dir / "manifest.json", manifest_json(results, settings));
    if (settings.emit_plots) emit_plot_data(results, config.output_dir / "plots");
  }
  return results;
}

}  // namespace stochhom
