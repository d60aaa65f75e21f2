#pragma once

#include <Eigen/Core>

namespace stochhom {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Parameters of the pointwise energy density
///
///     W(xi) = a |xi|^p / p + c |xi|^2 / 2,    p >= 2, a > 0, c >= 0.
///
/// The density is strictly convex in xi and attains its minimum (zero) at
/// xi = 0. Values are validated on construction; an EnergyParams that exists
/// is always admissible.
class EnergyParams {
public:
  EnergyParams(double p, double a, double c);

  double p() const { return p_; }
  double a() const { return a_; }
  double c() const { return c_; }

private:
  double p_;
  double a_;
  double c_;
};

double energy_value(const EnergyParams& params, const Vec2& xi);
Vec2 energy_gradient(const EnergyParams& params, const Vec2& xi);
/// Symmetric; the (p-2)|xi|^{p-4} xi xi^T term is taken as zero at xi = 0.
Mat2 energy_hessian(const EnergyParams& params, const Vec2& xi);

// Scalar (d = 1) versions.
double energy_value(const EnergyParams& params, double xi);
double energy_derivative(const EnergyParams& params, double xi);
double energy_second_derivative(const EnergyParams& params, double xi);

/// Inverse of xi -> W'(xi) in one dimension: the unique xi with
/// a xi |xi|^{p-2} + c xi = zeta. Bracketed Newton; sign(result) = sign(zeta).
double inverse_derivative(const EnergyParams& params, double zeta);

}  // namespace stochhom
