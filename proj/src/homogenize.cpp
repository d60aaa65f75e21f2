#include "stochhom/homogenize.hpp"

#include <chrono>

#include "stochhom/assembly.hpp"

namespace stochhom {

namespace {

void require_converged(const CorrectorState& corrector, const char* who) {
  if (!corrector.converged) throw std::invalid_argument(std::string(who) + ": corrector is not converged");
}

}  // namespace

double homogenized_value(const PeriodicMesh& mesh, const CoefficientField& field, double p, const Vec2& xi,
                         const CorrectorState& corrector) {
  require_converged(corrector, "homogenized_value");
  return assemble_energy(mesh, field, p, xi, corrector.w);
}

Vec2 homogenized_gradient(const PeriodicMesh& mesh, const CoefficientField& field, double p, const Vec2& xi,
                          const CorrectorState& corrector) {
  require_converged(corrector, "homogenized_gradient");
  const auto cells = cell_energies(mesh, field, p);
  Vec2 sum = Vec2::Zero();
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t)
    sum += energy_gradient(cells[mesh.cell_of_triangle(t)], xi + element_gradient(mesh, corrector.w, t));
  return sum * (mesh.triangle_area() / mesh.domain_measure());
}

Vector sensitivity_load(const PeriodicMesh& mesh, const CoefficientField& field, double p, const Vec2& xi,
                        const P1Field& w, int j) {
  if (j < 0 || j > 1) throw std::out_of_range("sensitivity_load: direction must be 0 or 1");
  const auto cells = cell_energies(mesh, field, p);
  Vector load = Vector::Zero(static_cast<Eigen::Index>(mesh.n_nodes()));
  const double area = mesh.triangle_area();
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const Vec2 column = area * energy_hessian(cells[mesh.cell_of_triangle(t)], xi + element_gradient(mesh, w, t)).col(j);
    const auto& tri = mesh.triangle(t);
    for (int a = 0; a < 3; ++a) load[tri[a]] += mesh.hat_gradient(t, a).dot(column);
  }
  return load;
}

std::array<P1Field, 2> corrector_sensitivities(const PeriodicMesh& mesh, const CoefficientField& field, double p,
                                               const Vec2& xi, const CorrectorState& corrector,
                                               const NewtonConfig& cfg) {
  require_converged(corrector, "corrector_sensitivities");
  const SparseMatrix hessian = assemble_hessian(mesh, field, p, xi, corrector.w);
  LinearSolverOptions solver;
  solver.relative_tolerance = 1e-12;
  const double a_scale = coefficient_scale(field);
  std::array<P1Field, 2> out;
  for (int j = 0; j < 2; ++j) {
    const Vector load = sensitivity_load(mesh, field, p, xi, corrector.w, j);
    bool regularized = false;
    out[j] = solve_with_regularization(mesh, hessian, -load, a_scale, cfg.hessian_regularization, solver,
                                       regularized);
  }
  return out;
}

Mat2 homogenized_hessian(const PeriodicMesh& mesh, const CoefficientField& field, double p, const Vec2& xi,
                         const CorrectorState& corrector, const std::array<P1Field, 2>& sensitivities) {
  require_converged(corrector, "homogenized_hessian");
  for (const auto& g : sensitivities)
    if (static_cast<std::size_t>(g.size()) != mesh.n_nodes())
      throw std::invalid_argument("homogenized_hessian: sensitivity size does not match mesh");
  const auto cells = cell_energies(mesh, field, p);
  double h00 = 0.0, h01 = 0.0, h11 = 0.0;
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const Mat2 tangent = energy_hessian(cells[mesh.cell_of_triangle(t)], xi + element_gradient(mesh, corrector.w, t));
    const Vec2 r0 = Vec2::UnitX() + element_gradient(mesh, sensitivities[0], t);
    const Vec2 r1 = Vec2::UnitY() + element_gradient(mesh, sensitivities[1], t);
    const Vec2 t0 = tangent * r0;
    h00 += r0.dot(t0);
    h01 += r1.dot(t0);
    h11 += r1.dot(tangent * r1);
  }
  const double scale = mesh.triangle_area() / mesh.domain_measure();
  Mat2 hess;
  hess << h00 * scale, h01 * scale, h01 * scale, h11 * scale;
  return hess;
}

PipelineResult full_pipeline(const CoefficientField& field, double p, const Vec2& xi, const PeriodicMesh& mesh,
                             const NewtonConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  PipelineResult result;
  result.outputs.xi = xi;

  try {
    result.corrector = solve_corrector(mesh, field, p, xi, cfg);
  } catch (const std::exception& e) {
    throw PipelineError("corrector", e.what());
  }
  if (!result.corrector.converged)
    throw PipelineError("corrector", "Newton did not converge in " + std::to_string(cfg.max_iterations) +
                                         " iterations (last increment " +
                                         std::to_string(result.corrector.final_increment) + ")");

  const auto& corr = result.corrector;
  try {
    result.outputs.value = homogenized_value(mesh, field, p, xi, corr);
    result.outputs.grad = homogenized_gradient(mesh, field, p, xi, corr);
  } catch (const std::exception& e) {
    throw PipelineError("gradient", e.what());
  }
  try {
    result.sensitivities = corrector_sensitivities(mesh, field, p, xi, corr, cfg);
  } catch (const std::exception& e) {
    throw PipelineError("sensitivities", e.what());
  }
  try {
    result.outputs.hess = homogenized_hessian(mesh, field, p, xi, corr, result.sensitivities);
  } catch (const std::exception& e) {
    throw PipelineError("hessian", e.what());
  }
  result.outputs.axial_first = xi.dot(result.outputs.grad);
  result.outputs.axial_second = xi.dot(result.outputs.hess * xi);

  result.log.newton_iterations = corr.iterations;
  result.log.increments = corr.increments;
  result.log.final_residual = corr.final_residual;
  result.log.halvings = corr.halvings;
  result.log.regularized = corr.regularized;
  result.log.linear_iterations = corr.linear_iterations;
  result.log.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace stochhom
