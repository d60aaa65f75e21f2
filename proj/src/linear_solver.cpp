#include "stochhom/linear_solver.hpp"

#include <cmath>

namespace stochhom {

const char* to_string(LinearSolveStatus status) {
  switch (status) {
    case LinearSolveStatus::converged: return "converged";
    case LinearSolveStatus::max_iterations: return "max_iterations";
    case LinearSolveStatus::breakdown: return "breakdown";
    case LinearSolveStatus::incompatible_rhs: return "incompatible_rhs";
  }
  return "unknown";
}

LinearSolveResult solve_spd(const SparseMatrix& matrix, const Vector& rhs, const LinearSolverOptions& options) {
  const Eigen::Index n = rhs.size();
  if (matrix.rows() != n || matrix.cols() != n)
    throw std::invalid_argument("solve_spd: matrix and right-hand side sizes differ");

  LinearSolveResult result;
  result.solution = Vector::Zero(n);

  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return result;

  const double constant_part = std::abs(rhs.sum()) / std::sqrt(static_cast<double>(n));
  if (constant_part > options.compatibility_tolerance * rhs_norm) {
    result.status = LinearSolveStatus::incompatible_rhs;
    result.relative_residual = 1.0;
    return result;
  }

  Vector b = rhs;
  remove_mean(b);
  const double b_norm = b.norm();
  if (b_norm == 0.0) return result;

  Vector inv_diag = matrix.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) inv_diag[i] = inv_diag[i] > 0.0 ? 1.0 / inv_diag[i] : 1.0;

  const int max_iter = static_cast<int>(std::ceil(options.iteration_cap_factor * std::sqrt(static_cast<double>(n))));
  const double target = options.relative_tolerance * b_norm;

  Vector& x = result.solution;
  Vector r = b;
  Vector z(n), d(n), q(n);
  int total_iterations = 0;

  // A few restarts from the true residual guard against drift of the recurrence.
  for (int restart = 0; restart < 4; ++restart) {
    z = inv_diag.cwiseProduct(r);
    remove_mean(z);
    d = z;
    double rz = r.dot(z);
    bool stop = false;
    while (total_iterations < max_iter) {
      if (r.norm() <= target) break;
      q.noalias() = matrix * d;
      const double dq = d.dot(q);
      if (!(dq > 0.0) || !std::isfinite(dq)) {
        result.status = LinearSolveStatus::breakdown;
        stop = true;
        break;
      }
      const double alpha = rz / dq;
      x.noalias() += alpha * d;
      r.noalias() -= alpha * q;
      z = inv_diag.cwiseProduct(r);
      remove_mean(z);
      const double rz_next = r.dot(z);
      d = z + (rz_next / rz) * d;
      rz = rz_next;
      ++total_iterations;
    }
    remove_mean(x);
    r = b - matrix * x;
    result.relative_residual = r.norm() / b_norm;
    if (stop) break;
    if (result.relative_residual <= options.relative_tolerance) {
      result.status = LinearSolveStatus::converged;
      break;
    }
    if (total_iterations >= max_iter) {
      result.status = LinearSolveStatus::max_iterations;
      break;
    }
  }
  if (result.status == LinearSolveStatus::converged && result.relative_residual > options.relative_tolerance)
    result.status = LinearSolveStatus::max_iterations;
  result.iterations = total_iterations;
  return result;
}

Vector solve_spd_or_throw(const SparseMatrix& matrix, const Vector& rhs, const LinearSolverOptions& options) {
  auto result = solve_spd(matrix, rhs, options);
  if (!result.ok())
    throw LinearSolverError(result.status, std::string("linear solve failed: ") + to_string(result.status) +
                                               " after " + std::to_string(result.iterations) +
                                               " iterations, relative residual " +
                                               std::to_string(result.relative_residual));
  return result.solution;
}

}  // namespace stochhom
