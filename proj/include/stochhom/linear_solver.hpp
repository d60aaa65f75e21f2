#pragma once

#include <stdexcept>
#include <string>

#include "stochhom/mesh.hpp"

namespace stochhom {

struct LinearSolverOptions {
  double relative_tolerance = 1e-10;
  /// Iteration cap is factor * sqrt(unknowns).
  double iteration_cap_factor = 50.0;
  /// Relative size of the constant component of rhs beyond which the
  /// system is declared incompatible.
  double compatibility_tolerance = 1e-8;
};

enum class LinearSolveStatus { converged, max_iterations, breakdown, incompatible_rhs };

const char* to_string(LinearSolveStatus status);

struct LinearSolveResult {
  Vector solution;
  LinearSolveStatus status = LinearSolveStatus::converged;
  int iterations = 0;
  double relative_residual = 0.0;

  bool ok() const { return status == LinearSolveStatus::converged; }
};

class LinearSolverError : public std::runtime_error {
public:
  LinearSolverError(LinearSolveStatus status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  LinearSolveStatus status() const { return status_; }

private:
  LinearSolveStatus status_;
};

/// Solves A u = rhs for symmetric A that is positive definite on the
/// zero-mean subspace and has the constants in its kernel (periodic
/// stiffness-type matrices). Returns the zero-mean solution.
///
/// Jacobi-preconditioned conjugate gradients; iterates and preconditioned
/// residuals are projected onto zero mean at every step. rhs must be
/// orthogonal to constants up to compatibility_tolerance.
LinearSolveResult solve_spd(const SparseMatrix& matrix, const Vector& rhs,
                            const LinearSolverOptions& options = {});

/// Same as solve_spd but throws LinearSolverError on any failure.
Vector solve_spd_or_throw(const SparseMatrix& matrix, const Vector& rhs,
                          const LinearSolverOptions& options = {});

}  // namespace stochhom
