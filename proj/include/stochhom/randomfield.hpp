#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stochhom {

/// Law of a per-cell coefficient: either deterministic, or a two-point
/// law taking `lo` and `hi` with probability 1/2 each.
class Distribution {
public:
  enum class Kind { constant, bernoulli };

  static Distribution constant(double value);
  static Distribution bernoulli(double lo, double hi);

  Kind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  /// Smallest value in the support.
  double min_value() const { return lo_; }

  /// Generalized inverse CDF. Non-decreasing on [0, 1]; maps a uniform
  /// variable to a variable with this law. Throws for x outside [0, 1].
  double inverse_cdf(double x) const;

  /// "constant(v)" or "bernoulli(lo, hi)"; parse() accepts the same syntax.
  std::string to_string() const;
  static Distribution parse(const std::string& text);

  friend bool operator==(const Distribution&, const Distribution&) = default;

private:
  Distribution(Kind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}
  Kind kind_;
  double lo_;
  double hi_;
};

/// Uniform variables X^a_k, X^c_k for one realization on n cells.
struct UniformDraws {
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;
  bool antithetic = false;
  std::vector<double> a_channel;
  std::vector<double> c_channel;

  std::size_t n_cells() const { return a_channel.size(); }
};

/// Counter-based uniform in (0, 1): a pure function of its four keys.
/// Values are odd multiples of 2^-53, so 1 - u is exact and stays in (0, 1).
double counter_uniform(std::uint64_t seed, std::uint64_t realization, std::uint64_t cell,
                       std::uint32_t channel);

UniformDraws draw_uniforms(std::uint64_t seed, std::uint64_t realization, std::size_t n_cells);

/// Replaces every value u by 1 - u and toggles the antithetic flag.
UniformDraws antithetic(const UniformDraws& draws);

/// Piecewise-constant coefficients on the N x N unit cells of
/// Q_N = (-N/2, N/2)^2. Cell (k1, k2) has linear index k1 + N * k2, with
/// k1, k2 in {0, ..., N-1} counted from the corner (-N/2, -N/2).
struct CoefficientField {
  int half_width = 0;  // N
  int dim = 2;
  std::vector<double> a_cells;
  std::vector<double> c_cells;

  std::size_t n_cells() const { return a_cells.size(); }
  std::size_t index(int k1, int k2) const {
    return static_cast<std::size_t>(k1) + static_cast<std::size_t>(half_width) * k2;
  }

  static CoefficientField uniform(int half_width, double a, double c);

  /// Periodic shift of the cell values by (s1, s2) lattice steps.
  CoefficientField shifted(int s1, int s2) const;

  /// Plain text rows "k1 k2 a c" in lexicographic (k1, k2) order.
  void dump(std::ostream& out) const;
};

CoefficientField realize_field(const Distribution& dist_a, const Distribution& dist_c,
                               const UniformDraws& draws, int half_width, int dim = 2);

}  // namespace stochhom
