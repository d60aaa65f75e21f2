#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stochhom/homogenize.hpp"
#include "stochhom/randomfield.hpp"

namespace stochhom {

/// The eight reported quantities, in reporting order.
enum class Quantity { value, grad_1, grad_2, hess_11, hess_12, hess_22, axial_first, axial_second };
inline constexpr std::size_t kQuantityCount = 8;
inline constexpr std::array<Quantity, kQuantityCount> kAllQuantities = {
    Quantity::value,   Quantity::grad_1,  Quantity::grad_2,      Quantity::hess_11,
    Quantity::hess_12, Quantity::hess_22, Quantity::axial_first, Quantity::axial_second};

std::string_view to_string(Quantity q);
using QuantityValues = std::array<double, kQuantityCount>;
QuantityValues extract_quantities(const HomogenizedOutputs& out);

/// One realization: maps uniform draws to the eight quantities, filling the
/// solve log. Must be safe to call concurrently.
using Sampler = std::function<QuantityValues(const UniformDraws&, SolveLog&)>;

/// Sampler running the 2D corrector pipeline on Q_N with the given laws.
struct FieldSetup {
  Distribution dist_a = Distribution::bernoulli(3.0, 23.0);
  Distribution dist_c = Distribution::constant(0.0);
  double p = 4.0;
  Vec2 xi = Vec2(1.0, 1.0);
  int half_width = 5;
  double mesh_h = 0.2;
  NewtonConfig newton;
};
Sampler make_field_sampler(const FieldSetup& setup);
std::size_t field_cell_count(const FieldSetup& setup);

struct SolveRecord {
  std::uint64_t realization = 0;
  bool antithetic = false;
  SolveLog log;
};

/// Draw-stream selector. The two arms read disjoint parts of the counter
/// space so the comparison is between independent experiments.
enum class Arm : std::uint64_t { monte_carlo = 0, antithetic = 1 };
std::uint64_t stream_index(Arm arm, std::uint64_t index);

struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t n_cells = 0;
  int threads = 1;
};

struct SampleSet {
  /// Per quantity: plain samples (MC arm) or pair averages (AV arm).
  std::array<std::vector<double>, kQuantityCount> samples;
  /// AV arm only: q(U_k) and q(1 - U_k) separately.
  std::array<std::vector<double>, kQuantityCount> first, second;
  std::vector<SolveRecord> solves;

  std::size_t size() const { return samples[0].size(); }
  std::size_t solve_count() const { return solves.size(); }
};

/// A realization failed; carries its stream index.
class RealizationError : public std::runtime_error {
public:
  RealizationError(std::uint64_t realization, bool antithetic, const std::string& what)
      : std::runtime_error("realization " + std::to_string(realization) + (antithetic ? " (antithetic)" : "") +
                           ": " + what),
        realization_(realization),
        antithetic_(antithetic) {}
  std::uint64_t realization() const { return realization_; }
  bool antithetic() const { return antithetic_; }

private:
  std::uint64_t realization_;
  bool antithetic_;
};

/// 2M independent realizations, stream indices stream_index(monte_carlo, 0..2M-1).
SampleSet run_mc(const Sampler& sampler, std::size_t n_samples, const RunOptions& options);

/// M antithetic pairs: pair k uses U_k = draws(stream_index(antithetic, k))
/// and 1 - U_k. Exactly 2M corrector solves.
SampleSet run_av(const Sampler& sampler, std::size_t m_pairs, const RunOptions& options);

struct EstimatorStats {
  std::size_t n_samples = 0;
  double mean = 0.0;
  double variance = 0.0;      // unbiased, divisor n - 1
  double ci_halfwidth = 0.0;  // 1.96 sqrt(variance / n)
};

EstimatorStats estimate(const std::vector<double>& samples);

struct QuantityComparison {
  EstimatorStats mc;
  EstimatorStats av;
  double v_mc = 0.0;  // Var_mc / 2
  double v_av = 0.0;  // Var_av
  double ratio = 0.0; // v_mc / v_av; NaN when both vanish
  bool ratio_defined = true;
  double ratio_ci_low = 0.0;   // bootstrap 2.5% quantile
  double ratio_ci_high = 0.0;  // bootstrap 97.5% quantile
};

struct ComparisonReport {
  std::array<QuantityComparison, kQuantityCount> quantities;
  const QuantityComparison& operator[](Quantity q) const { return quantities[static_cast<std::size_t>(q)]; }
};

/// Throws std::invalid_argument if either arm has fewer than two samples.
ComparisonReport compare(const SampleSet& mc, const SampleSet& av, std::size_t bootstrap_resamples = 1000,
                         std::uint64_t bootstrap_seed = 0);

/// Per-quantity statistics only; the arrays are plain sample vectors.
QuantityComparison compare_samples(const std::vector<double>& mc, const std::vector<double>& av,
                                   std::size_t bootstrap_resamples = 1000, std::uint64_t bootstrap_seed = 0);

/// Unbiased sample covariance of paired arrays.
double sample_covariance(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace stochhom
