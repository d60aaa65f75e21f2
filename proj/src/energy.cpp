#include "stochhom/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace stochhom {

EnergyParams::EnergyParams(double p, double a, double c) : p_(p), a_(a), c_(c) {
  if (!(p >= 2.0) || !std::isfinite(p))
    throw std::invalid_argument("EnergyParams: exponent p must be >= 2, got " + std::to_string(p));
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument("EnergyParams: coefficient a must be > 0, got " + std::to_string(a));
  if (!(c >= 0.0) || !std::isfinite(c))
    throw std::invalid_argument("EnergyParams: coefficient c must be >= 0, got " + std::to_string(c));
}

namespace {

// |x|^e for x = |xi|^2 given as squared norm, i.e. returns |xi|^(2e).
inline double pow_of_sq(double sq, double half_exponent) {
  if (half_exponent == 0.0) return 1.0;
  if (half_exponent == 1.0) return sq;
  if (sq == 0.0) return 0.0;
  return std::pow(sq, half_exponent);
}

}  // namespace

double energy_value(const EnergyParams& params, const Vec2& xi) {
  const double sq = xi.squaredNorm();
  const double p = params.p();
  return params.a() * pow_of_sq(sq, 0.5 * p) / p + 0.5 * params.c() * sq;
}

Vec2 energy_gradient(const EnergyParams& params, const Vec2& xi) {
  const double sq = xi.squaredNorm();
  const double factor = params.a() * pow_of_sq(sq, 0.5 * (params.p() - 2.0)) + params.c();
  return factor * xi;
}

Mat2 energy_hessian(const EnergyParams& params, const Vec2& xi) {
  const double sq = xi.squaredNorm();
  const double p = params.p();
  const double iso = params.a() * pow_of_sq(sq, 0.5 * (p - 2.0)) + params.c();
  Mat2 hess = iso * Mat2::Identity();
  if (sq > 0.0 && p > 2.0) {
    const double aniso = params.a() * (p - 2.0) * pow_of_sq(sq, 0.5 * (p - 4.0));
    const double off = aniso * xi[0] * xi[1];
    hess(0, 0) += aniso * xi[0] * xi[0];
    hess(1, 1) += aniso * xi[1] * xi[1];
    hess(0, 1) += off;
    hess(1, 0) += off;
  }
  return hess;
}

double energy_value(const EnergyParams& params, double xi) {
  const double r = std::abs(xi);
  const double p = params.p();
  return params.a() * (r == 0.0 ? 0.0 : std::pow(r, p)) / p + 0.5 * params.c() * xi * xi;
}

double energy_derivative(const EnergyParams& params, double xi) {
  const double r = std::abs(xi);
  const double p = params.p();
  const double radial = (p == 2.0) ? 1.0 : (r == 0.0 ? 0.0 : std::pow(r, p - 2.0));
  return (params.a() * radial + params.c()) * xi;
}

double energy_second_derivative(const EnergyParams& params, double xi) {
  const double r = std::abs(xi);
  const double p = params.p();
  const double radial = (p == 2.0) ? 1.0 : (r == 0.0 ? 0.0 : std::pow(r, p - 2.0));
  return params.a() * (p - 1.0) * radial + params.c();
}

double inverse_derivative(const EnergyParams& params, double zeta) {
  if (zeta == 0.0) return 0.0;
  const double target = std::abs(zeta);
  const double a = params.a();
  const double c = params.c();
  const double p = params.p();

  // f(x) = a x^{p-1} + c x - target is increasing and convex on x >= 0.
  auto residual = [&](double x) { return a * std::pow(x, p - 1.0) + c * x - target; };
  auto slope = [&](double x) { return a * (p - 1.0) * std::pow(x, p - 2.0) + c; };

  double lo = 0.0;
  double hi = std::pow(target / a, 1.0 / (p - 1.0)) + target / std::max(c, a);

  // Each term alone bounds the root from above; the smaller is a tight start.
  double x = std::pow(target / a, 1.0 / (p - 1.0));
  if (c > 0.0) x = std::min(x, target / c);
  x = std::clamp(x, lo, hi);

  const double tol = 1e-14 * std::max(1.0, target);
  for (int iter = 0; iter < 200; ++iter) {
    const double r = residual(x);
    if (std::abs(r) <= tol) break;
    if (r > 0.0)
      hi = x;
    else
      lo = x;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    const double df = slope(x);
    double next = df > 0.0 ? x - r / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return zeta > 0.0 ? x : -x;
}

}  // namespace stochhom
