#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "stochhom/energy.hpp"

namespace stochhom {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Structured periodic triangulation of Q_N = (-N/2, N/2)^2.
///
/// The square is cut into (N/h)^2 grid squares, each split along its
/// bottom-left to top-right diagonal. Nodes on opposite faces are
/// identified, so there are exactly (N/h)^2 nodes. Node (i, j) sits at
/// (-N/2 + i h, -N/2 + j h) and has index i + (N/h) j.
///
/// Since 1/h is an integer, every triangle lies in a single unit cell of the
/// coefficient lattice; cell_of_triangle() gives its index k1 + N k2.
class PeriodicMesh {
public:
  PeriodicMesh(int half_width, double h, int dim = 2);

  int half_width() const { return half_width_; }
  double h() const { return h_; }
  int per_cell() const { return per_cell_; }
  int nodes_per_side() const { return side_; }
  std::size_t n_nodes() const { return static_cast<std::size_t>(side_) * side_; }
  std::size_t n_triangles() const { return triangles_.size(); }
  double triangle_area() const { return 0.5 * h_ * h_; }
  double domain_measure() const { return static_cast<double>(half_width_) * half_width_; }

  const std::array<int, 3>& triangle(std::size_t t) const { return triangles_[t]; }
  std::size_t cell_of_triangle(std::size_t t) const { return cell_[t]; }
  /// Gradient of the hat function of local vertex v on triangle t.
  const Vec2& hat_gradient(std::size_t t, int v) const { return ref_grad_[kind_[t]][v]; }
  /// Node coordinates, unwrapped relative to triangle t's grid square.
  Vec2 vertex_position(std::size_t t, int v) const;
  Vec2 node_position(std::size_t node) const;

  /// Sparsity pattern shared by every stiffness-type matrix on this mesh.
  const SparseMatrix& pattern() const { return pattern_; }
  /// Offset into pattern().valuePtr() of entry (vertex a, vertex b) of triangle t.
  int slot(std::size_t t, int a, int b) const { return slots_[t][3 * a + b]; }

  /// Lumped mass (nodal area) of each node; h^2 on this mesh.
  double lumped_mass() const { return h_ * h_; }

  /// Plain text "node x y" and "tri i j k" rows.
  void dump(std::ostream& out) const;

private:
  int half_width_;
  double h_;
  int per_cell_;
  int side_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> square_;  // (i, j) of the grid square
  std::vector<unsigned char> kind_;         // 0: lower-right, 1: upper-left
  std::vector<std::size_t> cell_;
  std::array<std::array<Vec2, 3>, 2> ref_grad_;
  SparseMatrix pattern_;
  std::vector<std::array<int, 9>> slots_;
};

/// A continuous piecewise-affine periodic function given by its nodal values.
using P1Field = Vector;

/// Constant gradient of the P1 interpolant of w on triangle t.
Vec2 element_gradient(const PeriodicMesh& mesh, const P1Field& w, std::size_t t);

/// All triangle gradients at once.
std::vector<Vec2> element_gradients(const PeriodicMesh& mesh, const P1Field& w);

/// Mean of the nodal values (each node carries the same lumped mass).
double nodal_mean(const P1Field& w);
void remove_mean(P1Field& w);

}  // namespace stochhom
