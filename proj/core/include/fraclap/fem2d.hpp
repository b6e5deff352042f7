#pragma once

#include <functional>
#include <stdexcept>

#include "fraclap/mesh.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/sparse.hpp"

namespace fraclap {

/// Raised when Neumann data violate the solvability condition
/// |Omega| * fbar + int_{boundary} g = 0.
class CompatibilityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Smoothness { Smooth, Rough };

/// Closed-form boundary datum, evaluated at boundary quadrature points.
struct BoundaryDatum {
  Fn2d value;
  Smoothness smoothness = Smoothness::Smooth;

  double operator()(double x, double y) const { return value(x, y); }
};

enum class LinearSolver { Pcg, Direct };

/// Exact P1 stiffness; row sums vanish (constants in the kernel).
SparseSymmetricMatrix assemble_stiffness(const TriMesh& mesh);
/// Exact P1 (consistent) mass.
SparseSymmetricMatrix assemble_mass(const TriMesh& mesh);

/// Load vector F_i = int_Omega f * hat_i, by the 7-point triangle rule.
Eigen::VectorXd assemble_load(const TriMesh& mesh, const Fn2d& f);

/// int_Omega f by the 7-point triangle rule.
double integrate(const TriMesh& mesh, const Fn2d& f);
/// int_{boundary} g by 4-point Gauss per boundary edge.
double integrate_boundary(const TriMesh& mesh, const Fn2d& g);

/// Evaluate a P1 nodal function at a point inside triangle t.
double eval_p1(const TriMesh& mesh, const Eigen::VectorXd& u, int t,
               const Eigen::Vector2d& p);

/// L^2 projection of g onto the piecewise-linear boundary trace space.
/// Returns a full nodal vector; interior entries are zero.
Eigen::VectorXd l2_boundary_projection(const BoundaryDatum& g, const TriMesh& mesh);

/// Discrete harmonic function with boundary values Pi_h g (Laplace solve
/// with the projected trace as Dirichlet data).
Eigen::VectorXd solve_dirichlet_lift(const TriMesh& mesh, const BoundaryDatum& g,
                                     LinearSolver solver = LinearSolver::Pcg);

/// Zero-mean weak solution of -Lap v = fbar, dn v = g. Throws
/// CompatibilityViolation when |Omega|*fbar + int g deviates beyond 1e-10.
Eigen::VectorXd solve_neumann_lift(const TriMesh& mesh, const BoundaryDatum& g,
                                   double fbar,
                                   LinearSolver solver = LinearSolver::Pcg);

}  // namespace fraclap
