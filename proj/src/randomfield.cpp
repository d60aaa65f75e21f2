#include "stochhom/randomfield.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <regex>
#include <stdexcept>

namespace stochhom {

Distribution Distribution::constant(double value) {
  if (!std::isfinite(value) || value < 0.0)
    throw std::invalid_argument("constant distribution: value must be finite and >= 0");
  return Distribution(Kind::constant, value, value);
}

Distribution Distribution::bernoulli(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || !(lo < hi))
    throw std::invalid_argument("bernoulli distribution: need 0 <= lo < hi");
  return Distribution(Kind::bernoulli, lo, hi);
}

double Distribution::inverse_cdf(double x) const {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("inverse_cdf: argument must lie in [0, 1]");
  if (kind_ == Kind::constant) return lo_;
  // x = 1/2 goes to the upper atom.
  return x < 0.5 ? lo_ : hi_;
}

std::string Distribution::to_string() const {
  char buf[96];
  if (kind_ == Kind::constant)
    std::snprintf(buf, sizeof buf, "constant(%.17g)", lo_);
  else
    std::snprintf(buf, sizeof buf, "bernoulli(%.17g, %.17g)", lo_, hi_);
  return buf;
}

Distribution Distribution::parse(const std::string& text) {
  static const std::regex constant_re(R"(^\s*constant\s*\(\s*([^,()\s]+)\s*\)\s*$)");
  static const std::regex bernoulli_re(
      R"(^\s*bernoulli\s*\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)\s*$)");
  std::smatch m;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
  };
  if (std::regex_match(text, m, constant_re)) return constant(number(m[1].str()));
  if (std::regex_match(text, m, bernoulli_re))
    return bernoulli(number(m[1].str()), number(m[2].str()));
  throw std::invalid_argument("unrecognized distribution '" + text +
                              "' (expected constant(v) or bernoulli(lo, hi))");
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t realization, std::uint64_t cell,
                       std::uint32_t channel) {
  std::uint64_t h = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
  h = splitmix64(h ^ realization);
  h = splitmix64(h ^ (cell * 0xd1342543de82ef95ULL));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(channel) + 0x2545f4914f6cdd1dULL));
  // (2k + 1) 2^-53 with k < 2^52.
  const std::uint64_t k = h >> 12;
  return static_cast<double>(2 * k + 1) * 0x1.0p-53;
}

UniformDraws draw_uniforms(std::uint64_t seed, std::uint64_t realization, std::size_t n_cells) {
  if (n_cells == 0) throw std::invalid_argument("draw_uniforms: n_cells must be >= 1");
  UniformDraws draws;
  draws.seed = seed;
  draws.realization = realization;
  draws.a_channel.resize(n_cells);
  draws.c_channel.resize(n_cells);
  for (std::size_t k = 0; k < n_cells; ++k) {
    draws.a_channel[k] = counter_uniform(seed, realization, k, 0);
    draws.c_channel[k] = counter_uniform(seed, realization, k, 1);
  }
  return draws;
}

UniformDraws antithetic(const UniformDraws& draws) {
  UniformDraws out = draws;
  out.antithetic = !draws.antithetic;
  for (double& v : out.a_channel) v = 1.0 - v;
  for (double& v : out.c_channel) v = 1.0 - v;
  return out;
}

CoefficientField CoefficientField::uniform(int half_width, double a, double c) {
  if (half_width < 1) throw std::invalid_argument("CoefficientField: half_width must be >= 1");
  CoefficientField field;
  field.half_width = half_width;
  field.dim = 2;
  const std::size_t n = static_cast<std::size_t>(half_width) * half_width;
  field.a_cells.assign(n, a);
  field.c_cells.assign(n, c);
  return field;
}

CoefficientField CoefficientField::shifted(int s1, int s2) const {
  CoefficientField out = *this;
  const int n = half_width;
  auto wrap = [n](int k) { return ((k % n) + n) % n; };
  if (dim == 1) {
    for (int k1 = 0; k1 < n; ++k1) {
      out.a_cells[wrap(k1 + s1)] = a_cells[k1];
      out.c_cells[wrap(k1 + s1)] = c_cells[k1];
    }
    return out;
  }
  for (int k2 = 0; k2 < n; ++k2)
    for (int k1 = 0; k1 < n; ++k1) {
      const std::size_t dst = out.index(wrap(k1 + s1), wrap(k2 + s2));
      out.a_cells[dst] = a_cells[index(k1, k2)];
      out.c_cells[dst] = c_cells[index(k1, k2)];
    }
  return out;
}

void CoefficientField::dump(std::ostream& out) const {
  char buf[128];
  if (dim == 1) {
    for (int k1 = 0; k1 < half_width; ++k1) {
      std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", k1, a_cells[k1], c_cells[k1]);
      out << buf;
    }
    return;
  }
  for (int k1 = 0; k1 < half_width; ++k1)
    for (int k2 = 0; k2 < half_width; ++k2) {
      const std::size_t k = index(k1, k2);
      std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g\n", k1, k2, a_cells[k], c_cells[k]);
      out << buf;
    }
}

CoefficientField realize_field(const Distribution& dist_a, const Distribution& dist_c,
                               const UniformDraws& draws, int half_width, int dim) {
  if (half_width < 1) throw std::invalid_argument("realize_field: half_width must be >= 1");
  if (dim != 1 && dim != 2) throw std::invalid_argument("realize_field: dim must be 1 or 2");
  if (!(dist_a.min_value() > 0.0))
    throw std::invalid_argument("realize_field: the a-distribution must be bounded below by a positive value");
  std::size_t expected = static_cast<std::size_t>(half_width);
  if (dim == 2) expected *= static_cast<std::size_t>(half_width);
  if (draws.a_channel.size() != expected || draws.c_channel.size() != expected)
    throw std::invalid_argument("realize_field: draws have " + std::to_string(draws.n_cells()) +
                                " cells, lattice has " + std::to_string(expected));

  CoefficientField field;
  field.half_width = half_width;
  field.dim = dim;
  field.a_cells.resize(expected);
  field.c_cells.resize(expected);
  for (std::size_t k = 0; k < expected; ++k) {
    field.a_cells[k] = dist_a.inverse_cdf(draws.a_channel[k]);
    field.c_cells[k] = dist_c.inverse_cdf(draws.c_channel[k]);
  }
  return field;
}

}  // namespace stochhom
