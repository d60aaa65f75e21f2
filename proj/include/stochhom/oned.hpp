#pragma once

#include <vector>

#include "stochhom/energy.hpp"
#include "stochhom/randomfield.hpp"

namespace stochhom {

/// Periodic one-dimensional cell problem on N unit cells, each with its own
/// (a_i, c_i) and a common exponent p.
///
/// In 1D the flux W_i'(xi + w') is constant along the cell, equal to
/// zeta = dW*_N(xi), and the corrector gradient on cell i is psi_i(zeta) - xi
/// with psi_i the inverse of W_i'. Averaging gives the scalar equation
///
///     xi = (1/N) sum_i psi_i(zeta),
///
/// which is solved for zeta; value and second derivative follow in closed form.
class OneDProblem {
public:
  OneDProblem(std::vector<EnergyParams> cells);
  OneDProblem(double p, const std::vector<double>& a, const std::vector<double>& c);
  static OneDProblem from_field(const CoefficientField& field, double p);

  const std::vector<EnergyParams>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  double p() const { return cells_.front().p(); }

private:
  std::vector<EnergyParams> cells_;
};

/// zeta = dW*_N/dxi, the root of (1/N) sum_i psi_i(zeta) = xi.
double oned_grad_wstar(const OneDProblem& problem, double xi);

/// (1/N) sum_i W_i(psi_i(zeta)).
double oned_value_wstar(const OneDProblem& problem, double xi);

struct OneDHessian {
  double value = 0.0;
  /// Set when some pointwise second derivative vanishes (xi = 0, p > 2 and
  /// c_i = 0 in some cell); value is then 0 by continuity.
  bool degenerate = false;
};

/// 1 / d2W*_N = (1/N) sum_i 1 / W_i''(psi_i(zeta)).
OneDHessian oned_hess_wstar(const OneDProblem& problem, double xi);

/// (1/N) sum_i psi_i(zeta), the averaged strain at flux zeta.
double oned_mean_inverse(const OneDProblem& problem, double zeta);

}  // namespace stochhom
