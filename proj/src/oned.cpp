#include "stochhom/oned.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stochhom {

OneDProblem::OneDProblem(std::vector<EnergyParams> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw std::invalid_argument("OneDProblem: at least one cell is required");
  for (const auto& c : cells_)
    if (c.p() != cells_.front().p()) throw std::invalid_argument("OneDProblem: all cells must share p");
}

OneDProblem::OneDProblem(double p, const std::vector<double>& a, const std::vector<double>& c)
    : OneDProblem([&] {
        if (a.size() != c.size()) throw std::invalid_argument("OneDProblem: a and c must have equal length");
        std::vector<EnergyParams> cells;
        cells.reserve(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) cells.emplace_back(p, a[i], c[i]);
        return cells;
      }()) {}

OneDProblem OneDProblem::from_field(const CoefficientField& field, double p) {
  if (field.dim != 1) throw std::invalid_argument("OneDProblem::from_field: field must be one-dimensional");
  return OneDProblem(p, field.a_cells, field.c_cells);
}

double oned_mean_inverse(const OneDProblem& problem, double zeta) {
  double sum = 0.0;
  for (const auto& cell : problem.cells()) sum += inverse_derivative(cell, zeta);
  return sum / static_cast<double>(problem.size());
}

double oned_grad_wstar(const OneDProblem& problem, double xi) {
  if (xi == 0.0) return 0.0;
  const double p = problem.p();
  const double ax = std::abs(xi);
  double a_max = 0.0, c_max = 0.0;
  for (const auto& cell : problem.cells()) {
    a_max = std::max(a_max, cell.a());
    c_max = std::max(c_max, cell.c());
  }
  double lo = 0.0;
  double hi = a_max * ax * std::pow(1.0 + ax, p - 2.0) + c_max * ax + 1.0;

  // Work with |xi|; the map is odd.
  auto f = [&](double zeta) { return oned_mean_inverse(problem, zeta) - ax; };
  auto df = [&](double zeta) {
    double sum = 0.0;
    for (const auto& cell : problem.cells()) {
      const double curv = energy_second_derivative(cell, inverse_derivative(cell, zeta));
      sum += curv > 0.0 ? 1.0 / curv : std::numeric_limits<double>::infinity();
    }
    return sum / static_cast<double>(problem.size());
  };

  const double tol = 1e-13 * (1.0 + ax);
  double zeta = 0.5 * (lo + hi);
  for (int iter = 0; iter < 300; ++iter) {
    const double r = f(zeta);
    if (std::abs(r) <= tol) break;
    if (r > 0.0)
      hi = zeta;
    else
      lo = zeta;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    const double slope = df(zeta);
    double next = (slope > 0.0 && std::isfinite(slope)) ? zeta - r / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    zeta = next;
  }
  return xi > 0.0 ? zeta : -zeta;
}

double oned_value_wstar(const OneDProblem& problem, double xi) {
  const double zeta = oned_grad_wstar(problem, xi);
  double sum = 0.0;
  for (const auto& cell : problem.cells()) sum += energy_value(cell, inverse_derivative(cell, zeta));
  return sum / static_cast<double>(problem.size());
}

OneDHessian oned_hess_wstar(const OneDProblem& problem, double xi) {
  const double zeta = oned_grad_wstar(problem, xi);
  double compliance = 0.0;
  for (const auto& cell : problem.cells()) {
    const double curv = energy_second_derivative(cell, inverse_derivative(cell, zeta));
    if (curv <= 0.0) return {0.0, true};
    compliance += 1.0 / curv;
  }
  return {static_cast<double>(problem.size()) / compliance, false};
}

}  // namespace stochhom
