#pragma once

#include "fraclap/fem2d.hpp"
#include "fraclap/mesh.hpp"
#include "fraclap/sparse.hpp"

namespace fraclap {

/// Normalization constant d_s = 2^{1-2s} Gamma(1-s)/Gamma(s) of the
/// degenerate-elliptic extension, with d_{1/2} = 1.
double ds_constant(double s);

/// Stiffness of the cylinder form int y^alpha grad U . grad V with
/// alpha = 1 - 2s, assembled prism-by-prism with exact y-integration of the
/// weight (tensor product of the base stiffness/mass with weighted 1d
/// interval matrices).
SparseSymmetricMatrix assemble_weighted_stiffness(const CylinderMesh& cyl, double s);

struct ExtensionSolution {
  Eigen::VectorXd dofs;    // full cylinder dof vector, zeros on constraints
  Eigen::VectorXd trace;   // nodal values on the base mesh at y = 0
  double ds = 1.0;
  double load_trace = 0.0; // int_Omega f * trace
  double energy = 0.0;     // a_alpha(U, U)
};

/// Galerkin solution of the truncated extension problem with zero lateral and
/// top data: a_alpha(U, V) = d_s int_Omega f tr V. The trace approximates the
/// zero-boundary spectral solution of order s with right-hand side f.
ExtensionSolution solve_truncated_extension(const CylinderMesh& cyl, const Fn2d& f,
                                            double s,
                                            LinearSolver solver = LinearSolver::Pcg,
                                            double pcg_tol = 1e-10);

/// Energy identity: the squared spectral-norm error of the Galerkin trace
/// equals d_s (int f w - int f w_h); `exact_f_w` is the exact pairing.
double energy_error_squared(double exact_f_w, const ExtensionSolution& sol);

}  // namespace fraclap
