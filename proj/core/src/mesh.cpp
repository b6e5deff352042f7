#include "fraclap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fraclap {

int TriMesh::num_boundary_nodes() const {
  return static_cast<int>(std::count(boundary_node.begin(), boundary_node.end(), true));
}

double TriMesh::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Eigen::Vector2d a = nodes[tri[0]];
  const Eigen::Vector2d b = nodes[tri[1]];
  const Eigen::Vector2d c = nodes[tri[2]];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double TriMesh::total_area() const {
  double area = 0.0;
  for (int t = 0; t < num_triangles(); ++t) area += signed_area(t);
  return area;
}

TriMesh uniform_square_mesh(int M) {
  if (M < 1) throw std::invalid_argument("uniform_square_mesh: M must be >= 1");
  TriMesh mesh;
  const int n = M + 1;
  mesh.nodes.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      mesh.nodes.emplace_back(double(i) / M, double(j) / M);

  auto id = [n](int i, int j) { return j * n + i; };

  mesh.triangles.reserve(2u * M * M);
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i < M; ++i) {
      // split along the diagonal (i,j)-(i+1,j+1), both triangles CCW
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }

  // counter-clockwise boundary loop
  for (int i = 0; i < M; ++i) mesh.boundary_edges.push_back({id(i, 0), id(i + 1, 0)});
  for (int j = 0; j < M; ++j) mesh.boundary_edges.push_back({id(M, j), id(M, j + 1)});
  for (int i = M; i > 0; --i) mesh.boundary_edges.push_back({id(i, M), id(i - 1, M)});
  for (int j = M; j > 0; --j) mesh.boundary_edges.push_back({id(0, j), id(0, j - 1)});

  mesh.boundary_node.assign(mesh.nodes.size(), false);
  for (const auto& e : mesh.boundary_edges) {
    mesh.boundary_node[e[0]] = true;
    mesh.boundary_node[e[1]] = true;
  }
  mesh.h = std::sqrt(2.0) / M;
  return mesh;
}

GradedInterval graded_interval_with_gamma(int M, double gamma, double Y) {
  if (M < 1) throw std::invalid_argument("graded_interval: M must be >= 1");
  if (Y <= 0) throw std::invalid_argument("graded_interval: Y must be positive");
  GradedInterval g;
  g.M = M;
  g.gamma = gamma;
  g.Y = Y;
  g.breakpoints.resize(M + 1);
  for (int k = 0; k <= M; ++k)
    g.breakpoints[k] = std::pow(double(k) / M, gamma) * Y;
  g.breakpoints[0] = 0.0;
  g.breakpoints[M] = Y;
  return g;
}

GradedInterval graded_interval(int M, double s, double Y, double safety) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("graded_interval: s must lie in (0,1)");
  if (!(safety > 1.0))
    throw std::invalid_argument("graded_interval: safety factor must exceed 1");
  return graded_interval_with_gamma(M, safety * 3.0 / (2.0 * s), Y);
}

double default_truncation_height(std::size_t num_prisms) {
  const double lambda1 = 2.0 * M_PI * M_PI;
  return std::max(1.0, std::log(double(num_prisms)) / std::sqrt(lambda1));
}

CylinderMesh tensor_cylinder(TriMesh base, GradedInterval axis) {
  CylinderMesh cyl;
  cyl.base = std::move(base);
  cyl.axis = std::move(axis);
  cyl.constrained.assign(cyl.num_dofs(), false);
  const int nb = cyl.base.num_nodes();
  for (int level = 0; level < cyl.num_levels(); ++level) {
    const bool top = (level == cyl.axis.M);
    for (int node = 0; node < nb; ++node) {
      if (top || cyl.base.boundary_node[node])
        cyl.constrained[cyl.dof(node, level)] = true;
    }
  }
  return cyl;
}

void dump_mesh(const TriMesh& mesh, std::ostream& os) {
  for (const auto& p : mesh.nodes) os << p.x() << ' ' << p.y() << '\n';
  os << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace fraclap
