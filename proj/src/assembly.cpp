#include "stochhom/assembly.hpp"

#include <stdexcept>
#include <string>

namespace stochhom {

namespace {

void check_sizes(const PeriodicMesh& mesh, const CoefficientField& field) {
  if (field.dim != 2 || field.half_width != mesh.half_width() ||
      field.a_cells.size() != static_cast<std::size_t>(mesh.half_width()) * mesh.half_width() ||
      field.c_cells.size() != field.a_cells.size())
    throw std::invalid_argument("coefficient field (N = " + std::to_string(field.half_width) +
                                ", d = " + std::to_string(field.dim) +
                                ") does not match mesh (N = " + std::to_string(mesh.half_width()) + ")");
}

void check_field(const PeriodicMesh& mesh, const P1Field& w) {
  if (static_cast<std::size_t>(w.size()) != mesh.n_nodes())
    throw std::invalid_argument("nodal field has " + std::to_string(w.size()) + " entries, mesh has " +
                                std::to_string(mesh.n_nodes()) + " nodes");
}

}  // namespace

std::vector<EnergyParams> cell_energies(const PeriodicMesh& mesh, const CoefficientField& field, double p) {
  check_sizes(mesh, field);
  std::vector<EnergyParams> out;
  out.reserve(field.n_cells());
  for (std::size_t k = 0; k < field.n_cells(); ++k) out.emplace_back(p, field.a_cells[k], field.c_cells[k]);
  return out;
}

double assemble_energy(const PeriodicMesh& mesh, const CoefficientField& field, double p,
                       const Vec2& xi, const P1Field& w) {
  const auto cells = cell_energies(mesh, field, p);
  check_field(mesh, w);
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t)
    total += energy_value(cells[mesh.cell_of_triangle(t)], xi + element_gradient(mesh, w, t));
  return total * mesh.triangle_area() / mesh.domain_measure();
}

Vector assemble_residual(const PeriodicMesh& mesh, const CoefficientField& field, double p,
                         const Vec2& xi, const P1Field& w) {
  const auto cells = cell_energies(mesh, field, p);
  check_field(mesh, w);
  Vector res = Vector::Zero(static_cast<Eigen::Index>(mesh.n_nodes()));
  const double area = mesh.triangle_area();
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const Vec2 flux = area * energy_gradient(cells[mesh.cell_of_triangle(t)], xi + element_gradient(mesh, w, t));
    const auto& tri = mesh.triangle(t);
    for (int a = 0; a < 3; ++a) res[tri[a]] += mesh.hat_gradient(t, a).dot(flux);
  }
  return res;
}

SparseMatrix assemble_hessian(const PeriodicMesh& mesh, const CoefficientField& field, double p,
                              const Vec2& xi, const P1Field& w) {
  const auto cells = cell_energies(mesh, field, p);
  check_field(mesh, w);
  SparseMatrix mat = mesh.pattern();
  double* values = mat.valuePtr();
  const double area = mesh.triangle_area();
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const Mat2 tangent = area * energy_hessian(cells[mesh.cell_of_triangle(t)], xi + element_gradient(mesh, w, t));
    // Upper triangle mirrored, so the matrix is symmetric bit for bit.
    for (int a = 0; a < 3; ++a) {
      const Vec2 ta = tangent * mesh.hat_gradient(t, a);
      for (int b = a; b < 3; ++b) {
        const double v = ta.dot(mesh.hat_gradient(t, b));
        values[mesh.slot(t, a, b)] += v;
        if (b != a) values[mesh.slot(t, b, a)] += v;
      }
    }
  }
  return mat;
}

SparseMatrix assemble_stiffness(const PeriodicMesh& mesh, const std::vector<double>& cell_kappa) {
  if (cell_kappa.size() != static_cast<std::size_t>(mesh.half_width()) * mesh.half_width())
    throw std::invalid_argument("assemble_stiffness: coefficient count does not match mesh");
  SparseMatrix mat = mesh.pattern();
  double* values = mat.valuePtr();
  const double area = mesh.triangle_area();
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const double k = area * cell_kappa[mesh.cell_of_triangle(t)];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        values[mesh.slot(t, a, b)] += k * mesh.hat_gradient(t, a).dot(mesh.hat_gradient(t, b));
  }
  return mat;
}

Vector assemble_linear_load(const PeriodicMesh& mesh, const std::vector<double>& cell_kappa,
                            const Vec2& xi) {
  if (cell_kappa.size() != static_cast<std::size_t>(mesh.half_width()) * mesh.half_width())
    throw std::invalid_argument("assemble_linear_load: coefficient count does not match mesh");
  Vector load = Vector::Zero(static_cast<Eigen::Index>(mesh.n_nodes()));
  const double area = mesh.triangle_area();
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const Vec2 flux = area * cell_kappa[mesh.cell_of_triangle(t)] * xi;
    const auto& tri = mesh.triangle(t);
    for (int a = 0; a < 3; ++a) load[tri[a]] -= mesh.hat_gradient(t, a).dot(flux);
  }
  return load;
}

}  // namespace stochhom
