#include "stochhom/newton.hpp"

#include <algorithm>
#include <cmath>

#include "stochhom/assembly.hpp"

namespace stochhom {

void NewtonConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("NewtonConfig: tol must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("NewtonConfig: max_iterations must be >= 1");
  if (!(fd_grade_tol > 0.0)) throw std::invalid_argument("NewtonConfig: fd_grade_tol must be > 0");
  if (!(hessian_regularization >= 0.0))
    throw std::invalid_argument("NewtonConfig: hessian_regularization must be >= 0");
  if (max_halvings < 0) throw std::invalid_argument("NewtonConfig: max_halvings must be >= 0");
}

NewtonConfig NewtonConfig::fd_grade() const {
  NewtonConfig out = *this;
  out.tol = fd_grade_tol;
  return out;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::residual_zero: return "residual_zero";
    case StopReason::relative_increment: return "relative_increment";
    case StopReason::absolute_increment: return "absolute_increment";
    case StopReason::residual: return "residual";
    case StopReason::max_iterations: return "max_iterations";
  }
  return "unknown";
}

double w1p_norm(const PeriodicMesh& mesh, const P1Field& w, double p) {
  if (static_cast<std::size_t>(w.size()) != mesh.n_nodes())
    throw std::invalid_argument("w1p_norm: field size does not match mesh");
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const double avg = (w[tri[0]] + w[tri[1]] + w[tri[2]]) / 3.0;
    const double g = element_gradient(mesh, w, t).norm();
    sum += std::pow(std::abs(avg), p) + std::pow(g, p);
  }
  return std::pow(sum * mesh.triangle_area(), 1.0 / p);
}

double coefficient_scale(const CoefficientField& field) {
  double scale = 0.0;
  for (double a : field.a_cells) scale = std::max(scale, a);
  return scale > 0.0 ? scale : 1.0;
}

Vector solve_with_regularization(const PeriodicMesh& mesh, const SparseMatrix& hessian, const Vector& rhs,
                                 double a_scale, double eps, const LinearSolverOptions& solver,
                                 bool& regularized, int* iterations) {
  auto shifted = [&](double shift) {
    SparseMatrix mat = hessian;
    const double diag = shift * a_scale * mesh.lumped_mass();
    for (Eigen::Index i = 0; i < mat.rows(); ++i) mat.coeffRef(i, i) += diag;
    return mat;
  };

  // Weak forms tested against a partition of unity sum to zero; what remains is cancellation roundoff.
  Vector b = rhs;
  b.array() -= b.mean();
  LinearSolveResult result = eps > 0.0 ? solve_spd(shifted(eps), b, solver) : solve_spd(hessian, b, solver);
  if (eps > 0.0) regularized = true;
  if (!result.ok() && result.status != LinearSolveStatus::incompatible_rhs && eps == 0.0) {
    result = solve_spd(shifted(1e-10), b, solver);
    regularized = true;
  }
  if (iterations) *iterations += result.iterations;
  if (!result.ok())
    throw LinearSolverError(result.status, std::string("linear solve failed: ") + to_string(result.status) +
                                               ", relative residual " + std::to_string(result.relative_residual));
  return result.solution;
}

P1Field initial_guess(const PeriodicMesh& mesh, const CoefficientField& field, const Vec2& xi,
                      const LinearSolverOptions& solver) {
  (void)cell_energies(mesh, field, 2.0);  // validates sizes and coefficients
  std::vector<double> kappa(field.n_cells());
  for (std::size_t k = 0; k < kappa.size(); ++k) kappa[k] = field.a_cells[k] + field.c_cells[k];
  Vector load = assemble_linear_load(mesh, kappa, xi);
  load.array() -= load.mean();
  if (load.lpNorm<Eigen::Infinity>() == 0.0) return P1Field::Zero(static_cast<Eigen::Index>(mesh.n_nodes()));
  return solve_spd_or_throw(assemble_stiffness(mesh, kappa), load, solver);
}

CorrectorState solve_corrector(const PeriodicMesh& mesh, const CoefficientField& field, double p,
                               const Vec2& xi, const NewtonConfig& cfg, const std::optional<P1Field>& start) {
  cfg.validate();
  LinearSolverOptions solver;
  solver.relative_tolerance = std::clamp(0.01 * cfg.tol * cfg.tol, 1e-13, 1e-10);

  CorrectorState state;
  state.w = start ? *start : initial_guess(mesh, field, xi, solver);
  if (static_cast<std::size_t>(state.w.size()) != mesh.n_nodes())
    throw std::invalid_argument("solve_corrector: starting field size does not match mesh");
  remove_mean(state.w);

  const double a_scale = coefficient_scale(field);

  // Natural size of residual entries, h * |dW|, used as a roundoff floor.
  auto residual_floor = [&](const P1Field& w) {
    const auto cells = cell_energies(mesh, field, p);
    double flux = 0.0;
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t)
      flux = std::max(flux, energy_gradient(cells[mesh.cell_of_triangle(t)], xi + element_gradient(mesh, w, t)).norm());
    return 1e-12 * std::sqrt(static_cast<double>(mesh.n_nodes())) * mesh.h() * flux;
  };

  Vector residual = assemble_residual(mesh, field, p, xi, state.w);
  state.initial_residual = residual.norm();
  state.final_residual = state.initial_residual;
  const double floor = residual_floor(state.w);
  if (state.initial_residual <= floor) {
    state.converged = true;
    state.stop_reason = StopReason::residual_zero;
    return state;
  }

  double energy = assemble_energy(mesh, field, p, xi, state.w);
  double w_norm = w1p_norm(mesh, state.w, p);
  const double energy_slack = 1e-12 * std::max(1.0, std::abs(energy));

  for (int m = 1; m <= cfg.max_iterations; ++m) {
    const SparseMatrix hessian = assemble_hessian(mesh, field, p, xi, state.w);
    Vector step;
    try {
      step = solve_with_regularization(mesh, hessian, -residual, a_scale, cfg.hessian_regularization, solver,
                                       state.regularized, &state.linear_iterations);
    } catch (const LinearSolverError& e) {
      throw SolverError(std::string("Newton step ") + std::to_string(m) + ": " + e.what());
    }

    double scale = 1.0;
    P1Field trial = state.w + step;
    double trial_energy = assemble_energy(mesh, field, p, xi, trial);
    for (int k = 0; k < cfg.max_halvings && trial_energy > energy + energy_slack; ++k) {
      scale *= 0.5;
      trial = state.w + scale * step;
      trial_energy = assemble_energy(mesh, field, p, xi, trial);
      ++state.halvings;
    }
    remove_mean(trial);

    const double abs_increment = scale * w1p_norm(mesh, step, p);
    const double rel_increment = abs_increment / std::max(w_norm, 1e-14);
    state.w = std::move(trial);
    energy = trial_energy;
    w_norm = w1p_norm(mesh, state.w, p);
    state.iterations = m;
    state.increments.push_back(rel_increment);
    state.final_increment = rel_increment;

    residual = assemble_residual(mesh, field, p, xi, state.w);
    state.final_residual = residual.norm();

    if (rel_increment <= cfg.tol) {
      state.converged = true;
      state.stop_reason = StopReason::relative_increment;
      break;
    }
    if (abs_increment <= cfg.tol * 1e-8) {
      state.converged = true;
      state.stop_reason = StopReason::absolute_increment;
      break;
    }
    if (state.final_residual <= std::max(cfg.tol * cfg.tol * state.initial_residual, floor)) {
      state.converged = true;
      state.stop_reason = StopReason::residual;
      break;
    }
  }
  return state;
}

}  // namespace stochhom
