#pragma once

#include <vector>

#include "stochhom/energy.hpp"
#include "stochhom/mesh.hpp"
#include "stochhom/randomfield.hpp"

namespace stochhom {

/// Per-cell energy densities for a coefficient field and exponent p.
/// Throws if the field does not live on the mesh's lattice.
std::vector<EnergyParams> cell_energies(const PeriodicMesh& mesh, const CoefficientField& field, double p);

// Integrals over Q_N of the cell energy J(w) = int W(y, xi + grad w).
// All integrands are constant per triangle, so one evaluation per triangle is exact.

/// (1/|Q_N|) int_{Q_N} W(y, xi + grad w).
double assemble_energy(const PeriodicMesh& mesh, const CoefficientField& field, double p,
                       const Vec2& xi, const P1Field& w);

/// Entry i is D_w(phi_i) = int grad(phi_i) . dW(y, xi + grad w). Not normalized.
Vector assemble_residual(const PeriodicMesh& mesh, const CoefficientField& field, double p,
                         const Vec2& xi, const P1Field& w);

/// Entry (i, j) is int grad(phi_i)^T d2W(y, xi + grad w) grad(phi_j). Not normalized.
SparseMatrix assemble_hessian(const PeriodicMesh& mesh, const CoefficientField& field, double p,
                              const Vec2& xi, const P1Field& w);

/// Stiffness matrix of -div(kappa grad .) with kappa constant per cell.
SparseMatrix assemble_stiffness(const PeriodicMesh& mesh, const std::vector<double>& cell_kappa);

/// Load vector i -> -int kappa grad(phi_i) . xi, the right-hand side of
/// -div(kappa (xi + grad w)) = 0.
Vector assemble_linear_load(const PeriodicMesh& mesh, const std::vector<double>& cell_kappa,
                            const Vec2& xi);

}  // namespace stochhom
