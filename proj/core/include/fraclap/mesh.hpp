#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <vector>

#include <Eigen/Core>

namespace fraclap {

/// Conforming triangulation of a polygonal domain in the plane.
///
/// Triangles are positively oriented. Boundary edges traverse the boundary
/// counter-clockwise, so the domain lies to the left of every edge and the
/// outward normal is obtained by rotating the edge tangent by -pi/2.
struct TriMesh {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> boundary_edges;
  std::vector<bool> boundary_node;
  double h = 0.0;  // max element diameter

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_boundary_nodes() const;
  int num_interior_nodes() const { return num_nodes() - num_boundary_nodes(); }

  double signed_area(int t) const;
  double total_area() const;
};

/// Structured right-triangle mesh of (0,1)^2 with M cells per side.
/// (M+1)^2 nodes, 2 M^2 triangles, h = sqrt(2)/M. All angles <= pi/2.
TriMesh uniform_square_mesh(int M);

/// Mesh of [0,Y] with breakpoints y_k = (k/M)^gamma * Y, concentrating
/// cells near y = 0.
struct GradedInterval {
  int M = 0;
  double gamma = 1.0;
  double Y = 1.0;
  std::vector<double> breakpoints;  // y_0 = 0 .. y_M = Y, strictly increasing
};

/// Graded interval for fractional order s: gamma = safety * 3/(2s).
/// Throws std::invalid_argument for s outside (0,1).
GradedInterval graded_interval(int M, double s, double Y, double safety = 1.1);

/// Test hook: build with an explicitly prescribed grading exponent.
GradedInterval graded_interval_with_gamma(int M, double gamma, double Y);

/// Truncation height for a prism count, from the first Dirichlet eigenvalue
/// estimate 2*pi^2 on the unit square: Y = max(1, log(num_prisms)/sqrt(2 pi^2)).
double default_truncation_height(std::size_t num_prisms);

/// Tensor-product prism mesh of the cylinder Omega x (0,Y).
///
/// Degrees of freedom are (base node, level) pairs, level = 0..M. A dof is
/// constrained iff its base node lies on the lateral boundary or its level
/// is the top face.
struct CylinderMesh {
  TriMesh base;
  GradedInterval axis;
  std::vector<bool> constrained;  // indexed by dof

  int num_levels() const { return axis.M + 1; }
  int num_dofs() const { return base.num_nodes() * num_levels(); }
  std::size_t num_prisms() const {
    return static_cast<std::size_t>(base.num_triangles()) * axis.M;
  }
  int dof(int node, int level) const { return level * base.num_nodes() + node; }
};

CylinderMesh tensor_cylinder(TriMesh base, GradedInterval axis);

/// Plain-text dump: one "x y" line per node, then one line of node indices
/// per triangle, separated by a blank line.
void dump_mesh(const TriMesh& mesh, std::ostream& os);

}  // namespace fraclap
