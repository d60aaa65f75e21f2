#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochhom/linear_solver.hpp"
#include "stochhom/mesh.hpp"
#include "stochhom/randomfield.hpp"

namespace stochhom {

struct NewtonConfig {
  /// Relative W^{1,p} increment at which iterations stop.
  double tol = 1e-5;
  int max_iterations = 50;
  /// Tightened tolerance used by derivative-verification runs.
  double fd_grade_tol = 1e-10;
  /// Shift eps_H of the Hessian by eps_H * a_scale * lumped mass. Zero means
  /// the shift (1e-10) is only applied after a linear-solver breakdown.
  double hessian_regularization = 0.0;
  int max_halvings = 20;

  void validate() const;
  /// Same settings with tol replaced by fd_grade_tol.
  NewtonConfig fd_grade() const;
};

enum class StopReason { residual_zero, relative_increment, absolute_increment, residual, max_iterations };

const char* to_string(StopReason reason);

struct CorrectorState {
  P1Field w;
  int iterations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iterations;
  double final_increment = 0.0;
  std::vector<double> increments;  // relative W^{1,p} increments per step
  double initial_residual = 0.0;   // ||D_w||_2 at the initial guess
  double final_residual = 0.0;     // ||D_w||_2 at the returned iterate
  int halvings = 0;
  bool regularized = false;
  int linear_iterations = 0;
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Discrete W^{1,p} norm: (sum_t |T| (|mean_T w|^p + |grad w_T|^p))^{1/p}.
double w1p_norm(const PeriodicMesh& mesh, const P1Field& w, double p);

/// Zero-mean solution of -div[(a + c)(xi + grad w0)] = 0, periodic.
P1Field initial_guess(const PeriodicMesh& mesh, const CoefficientField& field, const Vec2& xi,
                      const LinearSolverOptions& solver = {});

/// Newton iteration H_{w^m}(w^{m+1} - w^m, .) = -D_{w^m}(.) for the cell
/// problem, started from `start` or from initial_guess(). Stops when
/// ||w^{m+1} - w^m|| / ||w^m|| <= tol in the discrete W^{1,p} norm (the
/// denominator floored at 1e-14), when the absolute increment is below
/// tol * 1e-8, or when the residual has dropped by tol^2. Steps that
/// increase the energy are halved. Iterates are kept at zero mean.
///
/// Returns converged = false after max_iterations; throws SolverError if a
/// linear solve fails even after regularization.
CorrectorState solve_corrector(const PeriodicMesh& mesh, const CoefficientField& field, double p,
                               const Vec2& xi, const NewtonConfig& cfg = {},
                               const std::optional<P1Field>& start = std::nullopt);

/// Largest a-coefficient, used to scale the Hessian shift.
double coefficient_scale(const CoefficientField& field);

/// Solves H u = rhs for a residual-type rhs (its constant component, pure
/// roundoff, is projected out); on failure retries with H + eps a_scale M
/// (M lumped mass). Sets `regularized` when the shift was needed.
Vector solve_with_regularization(const PeriodicMesh& mesh, const SparseMatrix& hessian, const Vector& rhs,
                                 double a_scale, double eps, const LinearSolverOptions& solver,
                                 bool& regularized, int* iterations = nullptr);

}  // namespace stochhom
