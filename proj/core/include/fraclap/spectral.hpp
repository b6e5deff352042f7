#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fraclap/fem2d.hpp"
#include "fraclap/mesh.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/sparse.hpp"

namespace fraclap {

enum class LaplaceKind { Dirichlet, Neumann };

/// Ordered, mass-orthonormal eigenpairs of the Laplacian, either in closed
/// form (interval / unit square) or as nodal vectors of the P1 generalized
/// eigenproblem A x = lambda M x.
class EigenBasis {
 public:
  enum class Rep { IntervalDirichlet, SquareDirichlet, SquareNeumann, Fem };

  LaplaceKind kind = LaplaceKind::Dirichlet;
  Rep rep = Rep::IntervalDirichlet;
  std::vector<double> eigenvalues;                // ascending
  std::vector<std::array<int, 2>> modes;          // analytic reps: (k,l), l unused in 1d
  double domain_measure = 1.0;

  // discrete representation
  std::shared_ptr<const TriMesh> mesh;
  Eigen::MatrixXd vectors;  // num_nodes x count, M-orthonormal columns
  SpMat stiffness, mass;

  int count() const { return static_cast<int>(eigenvalues.size()); }
  bool is_analytic() const { return rep != Rep::Fem; }

  /// Value of the L2-normalized mode j at a point (y ignored for interval).
  double mode_value(int j, double x, double y = 0.0) const;
  /// Outward normal derivative of mode j at a boundary point, closed form.
  /// Analytic representations only.
  double mode_normal_derivative(int j, double x, double y = 0.0) const;
};

EigenBasis analytic_interval_dirichlet_basis(int m);
/// Modes sin(k pi x1) sin(l pi x2), 1 <= k,l <= kmax, sorted by eigenvalue
/// with lexicographic (k,l) tie-break.
EigenBasis analytic_square_dirichlet_basis(int kmax);
/// Modes cos(k pi x1) cos(l pi x2), 0 <= k,l <= kmax; mu_1 = 0, psi_1 = 1.
EigenBasis analytic_square_neumann_basis(int kmax);

/// Smallest m eigenpairs of the P1 pencil on the mesh. Dense solve for small
/// free-dof counts, shift-invert subspace iteration otherwise; eigenvectors
/// are returned M-orthonormal with a deterministic sign.
EigenBasis fem_eigenbasis(const TriMesh& mesh, LaplaceKind kind, int m);

/// Expansion of a function: interior coefficients int_Omega u phi_k and the
/// boundary contribution of the nonzero-data operators.
struct SpectralCoefficients {
  const EigenBasis* basis = nullptr;
  Eigen::VectorXd interior;
  Eigen::VectorXd boundary;
  double offset = 0.0;          // Neumann normalization term
  double conormal_integral = 0.0;  // int_boundary dn u (Neumann expansions)
};

/// Dirichlet expansion of a closed-form u. The boundary part is
/// int_{boundary} u dn(phi_k): closed form on the interval, composite Gauss
/// edge quadrature on the square. `panels` = 0 picks a rule resolving the
/// highest retained mode.
SpectralCoefficients expand(const Fn2d& u, const EigenBasis& basis, int panels = 0);

/// Neumann expansion: boundary part is int_{boundary} dn(u) psi_k.
SpectralCoefficients expand_neumann(const Fn2d& u, const Fn2d& dnu,
                                    const EigenBasis& basis, int panels = 0);

/// Expansion of a nodal function in a discrete basis. The boundary part uses
/// the variational normal derivative
///   int_{boundary} dn(phi_k) v := a(phi_k, v) - lambda_k (phi_k, v)
/// summed over boundary hat functions weighted by u's boundary values.
SpectralCoefficients expand_fem(const Eigen::VectorXd& nodal, const EigenBasis& basis);

/// Closed-form expansion of u == constant on (0,1): interior 2c/(k pi) and
/// boundary -2c k pi on odd modes (unnormalized), scaled to the normalized
/// modes. Keeps the exact per-mode cancellation of the nonzero-data operator.
SpectralCoefficients expand_constant_interval(double value, const EigenBasis& basis);

/// (-Lap_D)^s with boundary data: lambda^s u_int + lambda^{s-1} u_bdry.
SpectralCoefficients apply_frac_dirichlet(const SpectralCoefficients& c, double s);
/// Classical zero-boundary operator: lambda^s u_int.
SpectralCoefficients apply_frac_dirichlet_zero(const SpectralCoefficients& c, double s);
/// Zero-mean Neumann operator with boundary data; k = 1 excluded, constant
/// offset -conormal_integral/|Omega|.
SpectralCoefficients apply_frac_neumann(const SpectralCoefficients& c, double s,
                                        double conormal_integral);
/// (-Lap_D)^s (-Lap_D)^{1-s}: the intermediate has zero trace, so the outer
/// factor is the zero-boundary operator.
SpectralCoefficients semigroup_compose(const SpectralCoefficients& c, double s);

/// Partial sums S_1..S_l of 4 pi^{2t-2} sum (2k-1)^{2t-2}, the squared
/// H^{t-2s}-norm series of the zero-boundary operator applied to u == 1.
std::vector<double> divergent_norm_partial_sums(double t, int l);

}  // namespace fraclap
