#include "stochhom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace stochhom {

PeriodicMesh::PeriodicMesh(int half_width, double h, int dim) : half_width_(half_width), h_(h) {
  if (dim != 2) throw std::invalid_argument("PeriodicMesh: only d = 2 is supported, got d = " + std::to_string(dim));
  if (half_width < 1) throw std::invalid_argument("PeriodicMesh: N must be >= 1");
  if (!(h > 0.0) || !(h <= 1.0)) throw std::invalid_argument("PeriodicMesh: h must lie in (0, 1]");
  const double inv = 1.0 / h;
  per_cell_ = static_cast<int>(std::lround(inv));
  if (per_cell_ < 1 || std::abs(inv - per_cell_) > 1e-9 * inv)
    throw std::invalid_argument("PeriodicMesh: 1/h must be an integer, got 1/h = " + std::to_string(inv));
  h_ = 1.0 / per_cell_;
  side_ = half_width_ * per_cell_;

  const double ih = 1.0 / h_;
  // Lower-right triangle (v00, v10, v11) and upper-left triangle (v00, v11, v01).
  ref_grad_[0] = {Vec2(-ih, 0.0), Vec2(ih, -ih), Vec2(0.0, ih)};
  ref_grad_[1] = {Vec2(0.0, -ih), Vec2(ih, 0.0), Vec2(-ih, ih)};

  auto node = [this](int i, int j) { return (i % side_) + side_ * (j % side_); };
  const std::size_t n_sq = static_cast<std::size_t>(side_) * side_;
  triangles_.reserve(2 * n_sq);
  square_.reserve(2 * n_sq);
  kind_.reserve(2 * n_sq);
  cell_.reserve(2 * n_sq);
  for (int j = 0; j < side_; ++j) {
    for (int i = 0; i < side_; ++i) {
      const int v00 = node(i, j), v10 = node(i + 1, j), v11 = node(i + 1, j + 1), v01 = node(i, j + 1);
      const std::size_t cell = static_cast<std::size_t>(i / per_cell_) +
                               static_cast<std::size_t>(half_width_) * (j / per_cell_);
      triangles_.push_back({v00, v10, v11});
      square_.push_back({i, j});
      kind_.push_back(0);
      cell_.push_back(cell);
      triangles_.push_back({v00, v11, v01});
      square_.push_back({i, j});
      kind_.push_back(1);
      cell_.push_back(cell);
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * triangles_.size());
  for (const auto& tri : triangles_)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trips.emplace_back(tri[a], tri[b], 0.0);
  pattern_.resize(static_cast<Eigen::Index>(n_nodes()), static_cast<Eigen::Index>(n_nodes()));
  pattern_.setFromTriplets(trips.begin(), trips.end());
  pattern_.makeCompressed();

  const int* outer = pattern_.outerIndexPtr();
  const int* inner = pattern_.innerIndexPtr();
  slots_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int a = 0; a < 3; ++a) {
      const int row = triangles_[t][a];
      for (int b = 0; b < 3; ++b) {
        const int col = triangles_[t][b];
        const int* first = inner + outer[row];
        const int* last = inner + outer[row + 1];
        const int* pos = std::lower_bound(first, last, col);
        slots_[t][3 * a + b] = static_cast<int>(pos - inner);
      }
    }
  }
}

Vec2 PeriodicMesh::vertex_position(std::size_t t, int v) const {
  static constexpr int offset[2][3][2] = {{{0, 0}, {1, 0}, {1, 1}}, {{0, 0}, {1, 1}, {0, 1}}};
  const auto [i, j] = square_[t];
  const double origin = -0.5 * half_width_;
  return {origin + (i + offset[kind_[t]][v][0]) * h_, origin + (j + offset[kind_[t]][v][1]) * h_};
}

Vec2 PeriodicMesh::node_position(std::size_t node) const {
  const double origin = -0.5 * half_width_;
  const int i = static_cast<int>(node % side_);
  const int j = static_cast<int>(node / side_);
  return {origin + i * h_, origin + j * h_};
}

void PeriodicMesh::dump(std::ostream& out) const {
  for (std::size_t n = 0; n < n_nodes(); ++n) {
    const Vec2 y = node_position(n);
    out << "node " << y.x() << ' ' << y.y() << '\n';
  }
  for (const auto& tri : triangles_) out << "tri " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
}

Vec2 element_gradient(const PeriodicMesh& mesh, const P1Field& w, std::size_t t) {
  const auto& tri = mesh.triangle(t);
  return w[tri[0]] * mesh.hat_gradient(t, 0) + w[tri[1]] * mesh.hat_gradient(t, 1) +
         w[tri[2]] * mesh.hat_gradient(t, 2);
}

std::vector<Vec2> element_gradients(const PeriodicMesh& mesh, const P1Field& w) {
  if (static_cast<std::size_t>(w.size()) != mesh.n_nodes())
    throw std::invalid_argument("element_gradients: field size does not match mesh");
  std::vector<Vec2> grads(mesh.n_triangles());
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) grads[t] = element_gradient(mesh, w, t);
  return grads;
}

double nodal_mean(const P1Field& w) { return w.size() == 0 ? 0.0 : w.mean(); }

void remove_mean(P1Field& w) { w.array() -= nodal_mean(w); }

}  // namespace stochhom
