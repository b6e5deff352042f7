#pragma once

#include <memory>
#include <string>

#include "fraclap/extension.hpp"
#include "fraclap/fem2d.hpp"
#include "fraclap/mesh.hpp"
#include "fraclap/spectral.hpp"

namespace fraclap {

/// One nonhomogeneous fractional problem on the unit square.
struct FractionalProblemSpec {
  LaplaceKind kind = LaplaceKind::Dirichlet;
  double s = 0.5;
  Fn2d f;
  BoundaryDatum g;          // Dirichlet trace, or Neumann conormal data
  int M = 8;                // base-mesh cells per side
  double gamma_safety = 1.1;
  double Y = 0.0;           // 0 selects the default truncation height
  int m = 200;              // spectral truncation, Neumann path
  LinearSolver solver = LinearSolver::Pcg;
};

struct DirichletSolution {
  std::shared_ptr<const TriMesh> mesh;
  Eigen::VectorXd u;  // = v + w
  Eigen::VectorXd v;  // discrete harmonic lifting of the boundary data
  Eigen::VectorXd w;  // extension trace (zero-boundary part)
  ExtensionSolution ext;
  std::size_t num_prisms = 0;
};

/// u_h = trace of the truncated weighted extension + harmonic lifting of g.
/// Boundary nodal values of u_h equal the projected trace of g.
DirichletSolution solve_dirichlet_problem(const FractionalProblemSpec& spec);

struct NeumannSolution {
  std::shared_ptr<const TriMesh> mesh;
  Eigen::VectorXd u;  // = v + w
  Eigen::VectorXd v;  // zero-mean lifting: -Lap v = mean(f), dn v = g
  Eigen::VectorXd w;  // zero-mean spectral part
  double tail_indicator = 0.0;  // mu_m^{-s} * norm of the unresolved load
  bool tail_warning = false;    // indicator above 1e-6
};

/// Zero-mean spectral solve of the Neumann operator plus the lifting.
/// Throws CompatibilityViolation unless int f + int_boundary g vanishes
/// within 1e-10. An externally computed Neumann eigenbasis on the same mesh
/// may be supplied to amortize sweeps.
NeumannSolution solve_neumann_problem(const FractionalProblemSpec& spec,
                                      const EigenBasis* basis = nullptr);

/// Named closed-form data: "zero", "one", "affine" (x1 + x2),
/// "sin_product" (sin(2 pi x1) sin(2 pi x2)), "cos_x1" (2 cos(pi x1)),
/// "corner_singular" (r^0.4999 sin(0.4999 theta), corner at the origin).
Fn2d named_function(const std::string& name);

/// Parse a JSON problem file with keys kind, s, f, g, M, gamma_safety, Y, m.
/// f and g are named built-ins or descriptors
/// {"poly": [[c, px, py], ...]}, {"sin_sin": [k, l]}, {"cos_cos": [k, l]}.
/// Throws std::invalid_argument on malformed input.
FractionalProblemSpec parse_problem_json(const std::string& text);

}  // namespace fraclap
