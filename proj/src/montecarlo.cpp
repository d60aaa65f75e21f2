#include "stochhom/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

namespace stochhom {

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::value: return "value";
    case Quantity::grad_1: return "grad_1";
    case Quantity::grad_2: return "grad_2";
    case Quantity::hess_11: return "hess_11";
    case Quantity::hess_12: return "hess_12";
    case Quantity::hess_22: return "hess_22";
    case Quantity::axial_first: return "axial_first";
    case Quantity::axial_second: return "axial_second";
  }
  return "unknown";
}

QuantityValues extract_quantities(const HomogenizedOutputs& out) {
  return {out.value,      out.grad[0],    out.grad[1],      out.hess(0, 0),
          out.hess(0, 1), out.hess(1, 1), out.axial_first, out.axial_second};
}

std::size_t field_cell_count(const FieldSetup& setup) {
  return static_cast<std::size_t>(setup.half_width) * static_cast<std::size_t>(setup.half_width);
}

Sampler make_field_sampler(const FieldSetup& setup) {
  auto mesh = std::make_shared<const PeriodicMesh>(setup.half_width, setup.mesh_h);
  return [setup, mesh](const UniformDraws& draws, SolveLog& log) {
    const CoefficientField field = realize_field(setup.dist_a, setup.dist_c, draws, setup.half_width, 2);
    PipelineResult result = full_pipeline(field, setup.p, setup.xi, *mesh, setup.newton);
    log = std::move(result.log);
    return extract_quantities(result.outputs);
  };
}

std::uint64_t stream_index(Arm arm, std::uint64_t index) {
  return (static_cast<std::uint64_t>(arm) << 48) | index;
}

namespace {

/// Runs body(i) for i in [0, n) on `threads` workers. On failure the error
/// of the lowest failing index is rethrown, so the outcome does not depend
/// on scheduling.
template <class Body>
void parallel_for(std::size_t n, int threads, Body body) {
  const std::size_t workers = std::clamp<std::size_t>(threads < 1 ? 1 : static_cast<std::size_t>(threads), 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

QuantityValues sample_one(const Sampler& sampler, const UniformDraws& draws, SolveRecord& record) {
  record.realization = draws.realization;
  record.antithetic = draws.antithetic;
  try {
    return sampler(draws, record.log);
  } catch (const std::exception& e) {
    throw RealizationError(draws.realization, draws.antithetic, e.what());
  }
}

void check_options(const RunOptions& options) {
  if (options.n_cells == 0) throw std::invalid_argument("RunOptions: n_cells must be >= 1");
}

}  // namespace

SampleSet run_mc(const Sampler& sampler, std::size_t n_samples, const RunOptions& options) {
  check_options(options);
  SampleSet out;
  for (auto& s : out.samples) s.assign(n_samples, 0.0);
  out.solves.resize(n_samples);
  parallel_for(n_samples, options.threads, [&](std::size_t m) {
    const auto draws = draw_uniforms(options.seed, stream_index(Arm::monte_carlo, m), options.n_cells);
    const QuantityValues q = sample_one(sampler, draws, out.solves[m]);
    for (std::size_t k = 0; k < kQuantityCount; ++k) out.samples[k][m] = q[k];
  });
  return out;
}

SampleSet run_av(const Sampler& sampler, std::size_t m_pairs, const RunOptions& options) {
  check_options(options);
  SampleSet out;
  for (std::size_t k = 0; k < kQuantityCount; ++k) {
    out.samples[k].assign(m_pairs, 0.0);
    out.first[k].assign(m_pairs, 0.0);
    out.second[k].assign(m_pairs, 0.0);
  }
  out.solves.resize(2 * m_pairs);
  // Job 2k solves U_k, job 2k + 1 solves 1 - U_k; both derive from the same draws.
  parallel_for(2 * m_pairs, options.threads, [&](std::size_t job) {
    const std::size_t pair = job / 2;
    UniformDraws draws = draw_uniforms(options.seed, stream_index(Arm::antithetic, pair), options.n_cells);
    if (job % 2 == 1) draws = antithetic(draws);
    const QuantityValues q = sample_one(sampler, draws, out.solves[job]);
    auto& dst = (job % 2 == 0) ? out.first : out.second;
    for (std::size_t k = 0; k < kQuantityCount; ++k) dst[k][pair] = q[k];
  });
  for (std::size_t k = 0; k < kQuantityCount; ++k)
    for (std::size_t i = 0; i < m_pairs; ++i) out.samples[k][i] = 0.5 * (out.first[k][i] + out.second[k][i]);
  return out;
}

EstimatorStats estimate(const std::vector<double>& samples) {
  EstimatorStats stats;
  stats.n_samples = samples.size();
  if (samples.empty()) return stats;
  double sum = 0.0;
  for (double v : samples) sum += v;
  stats.mean = sum / static_cast<double>(samples.size());
  if (samples.size() < 2) return stats;
  double sq = 0.0;
  for (double v : samples) sq += (v - stats.mean) * (v - stats.mean);
  stats.variance = sq / static_cast<double>(samples.size() - 1);
  stats.ci_halfwidth = 1.96 * std::sqrt(stats.variance / static_cast<double>(samples.size()));
  return stats;
}

namespace {

double unbiased_variance(const std::vector<double>& x, const std::vector<std::size_t>& idx) {
  double mean = 0.0;
  for (std::size_t i : idx) mean += x[i];
  mean /= static_cast<double>(idx.size());
  double sq = 0.0;
  for (std::size_t i : idx) sq += (x[i] - mean) * (x[i] - mean);
  return sq / static_cast<double>(idx.size() - 1);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace

QuantityComparison compare_samples(const std::vector<double>& mc, const std::vector<double>& av,
                                   std::size_t bootstrap_resamples, std::uint64_t bootstrap_seed) {
  if (mc.size() < 2 || av.size() < 2)
    throw std::invalid_argument("compare: both arms need at least two samples");
  QuantityComparison out;
  out.mc = estimate(mc);
  out.av = estimate(av);
  out.v_mc = 0.5 * out.mc.variance;
  out.v_av = out.av.variance;
  if (out.v_av > 0.0) {
    out.ratio = out.v_mc / out.v_av;
  } else {
    out.ratio = out.v_mc > 0.0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
    out.ratio_defined = false;
  }

  out.ratio_ci_low = out.ratio_ci_high = out.ratio;
  if (out.ratio_defined && bootstrap_resamples > 0) {
    std::mt19937_64 rng(bootstrap_seed);
    std::uniform_int_distribution<std::size_t> pick_mc(0, mc.size() - 1), pick_av(0, av.size() - 1);
    std::vector<std::size_t> idx_mc(mc.size()), idx_av(av.size());
    std::vector<double> ratios;
    ratios.reserve(bootstrap_resamples);
    for (std::size_t b = 0; b < bootstrap_resamples; ++b) {
      for (auto& i : idx_mc) i = pick_mc(rng);
      for (auto& i : idx_av) i = pick_av(rng);
      const double vav = unbiased_variance(av, idx_av);
      if (vav > 0.0) ratios.push_back(0.5 * unbiased_variance(mc, idx_mc) / vav);
    }
    out.ratio_ci_low = quantile(ratios, 0.025);
    out.ratio_ci_high = quantile(ratios, 0.975);
  }
  return out;
}

ComparisonReport compare(const SampleSet& mc, const SampleSet& av, std::size_t bootstrap_resamples,
                         std::uint64_t bootstrap_seed) {
  ComparisonReport report;
  for (std::size_t k = 0; k < kQuantityCount; ++k)
    report.quantities[k] = compare_samples(mc.samples[k], av.samples[k], bootstrap_resamples, bootstrap_seed + k);
  return report;
}

double sample_covariance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("sample_covariance: need paired arrays of size >= 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log_log_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace stochhom
