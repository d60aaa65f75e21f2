#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "stochhom/newton.hpp"

namespace stochhom {

/// Apparent homogenized quantities for one realization at one xi.
struct HomogenizedOutputs {
  Vec2 xi = Vec2::Zero();
  double value = 0.0;  // W*_N(xi)
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
  double axial_first = 0.0;   // xi . grad
  double axial_second = 0.0;  // xi^T hess xi
};

/// Per-solve diagnostics carried alongside the outputs.
struct SolveLog {
  int newton_iterations = 0;
  std::vector<double> increments;
  double final_residual = 0.0;
  int halvings = 0;
  bool regularized = false;
  int linear_iterations = 0;
  double wall_seconds = 0.0;
};

struct PipelineResult {
  HomogenizedOutputs outputs;
  CorrectorState corrector;
  std::array<P1Field, 2> sensitivities;
  SolveLog log;
};

/// Identifies which stage of the per-realization pipeline failed.
class PipelineError : public std::runtime_error {
public:
  PipelineError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

/// Energy at the converged corrector, (1/|Q_N|) int W(y, xi + grad w^N).
double homogenized_value(const PeriodicMesh& mesh, const CoefficientField& field, double p, const Vec2& xi,
                         const CorrectorState& corrector);

/// (1/|Q_N|) int dW(y, xi + grad w^N). Needs no corrector derivative.
Vec2 homogenized_gradient(const PeriodicMesh& mesh, const CoefficientField& field, double p, const Vec2& xi,
                          const CorrectorState& corrector);

/// Load of the sensitivity problem for direction j: entry i is
/// int grad(phi_i)^T d2W(y, xi + grad w^N) e_j.
Vector sensitivity_load(const PeriodicMesh& mesh, const CoefficientField& field, double p, const Vec2& xi,
                        const P1Field& w, int j);

/// g_j = dw^N/dxi_j, zero-mean solutions of H g_j = -load_j.
std::array<P1Field, 2> corrector_sensitivities(const PeriodicMesh& mesh, const CoefficientField& field, double p,
                                               const Vec2& xi, const CorrectorState& corrector,
                                               const NewtonConfig& cfg = {});

/// (1/|Q_N|) int (Id + G) d2W (Id + G)^T with row j of G equal to grad g_j.
/// Upper triangle computed and mirrored, so the result is exactly symmetric.
Mat2 homogenized_hessian(const PeriodicMesh& mesh, const CoefficientField& field, double p, const Vec2& xi,
                         const CorrectorState& corrector, const std::array<P1Field, 2>& sensitivities);

/// initial_guess -> solve_corrector -> value, gradient, sensitivities,
/// Hessian and the two axial scalars. Throws PipelineError naming the stage.
PipelineResult full_pipeline(const CoefficientField& field, double p, const Vec2& xi, const PeriodicMesh& mesh,
                             const NewtonConfig& cfg = {});

}  // namespace stochhom
