#include "fraclap/extension.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace fraclap {
namespace {

// int_a^b y^{alpha+p} dy, alpha + p + 1 > 0
double weight_moment(double a, double b, double alpha, int p) {
  const double e = alpha + p + 1.0;
  return (std::pow(b, e) - std::pow(a, e)) / e;
}

void base_element_matrices(const TriMesh& mesh, int t, Eigen::Matrix3d& S,
                           Eigen::Matrix3d& M) {
  const auto& tri = mesh.triangles[t];
  const Eigen::Vector2d& p0 = mesh.nodes[tri[0]];
  const Eigen::Vector2d& p1 = mesh.nodes[tri[1]];
  const Eigen::Vector2d& p2 = mesh.nodes[tri[2]];
  const double area = mesh.signed_area(t);
  Eigen::Matrix<double, 2, 3> grads;
  grads.col(0) << p1.y() - p2.y(), p2.x() - p1.x();
  grads.col(1) << p2.y() - p0.y(), p0.x() - p2.x();
  grads.col(2) << p0.y() - p1.y(), p1.x() - p0.x();
  grads /= 2.0 * area;
  S = area * grads.transpose() * grads;
  M << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  M *= area / 12.0;
}

}  // namespace

double ds_constant(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("ds_constant: s in (0,1)");
  return std::pow(2.0, 1.0 - 2.0 * s) * std::tgamma(1.0 - s) / std::tgamma(s);
}

SparseSymmetricMatrix assemble_weighted_stiffness(const CylinderMesh& cyl, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("assemble_weighted_stiffness: s in (0,1)");
  const double alpha = 1.0 - 2.0 * s;
  const TriMesh& base = cyl.base;
  const int nt = base.num_triangles();

  std::vector<Eigen::Matrix3d> S(nt), M(nt);
  for (int t = 0; t < nt; ++t) base_element_matrices(base, t, S[t], M[t]);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(cyl.num_prisms()) * 36);

  for (int level = 0; level < cyl.axis.M; ++level) {
    const double a = cyl.axis.breakpoints[level];
    const double b = cyl.axis.breakpoints[level + 1];
    const double d = b - a;
    const double I0 = weight_moment(a, b, alpha, 0);
    const double I1 = weight_moment(a, b, alpha, 1);
    const double I2 = weight_moment(a, b, alpha, 2);
    // weighted 1d mass of the hats (b-y)/d, (y-a)/d
    Eigen::Matrix2d W1;
    W1(0, 0) = (b * b * I0 - 2.0 * b * I1 + I2) / (d * d);
    W1(0, 1) = (-I2 + (a + b) * I1 - a * b * I0) / (d * d);
    W1(1, 0) = W1(0, 1);
    W1(1, 1) = (I2 - 2.0 * a * I1 + a * a * I0) / (d * d);
    // weighted 1d stiffness
    Eigen::Matrix2d W2;
    W2 << 1, -1, -1, 1;
    W2 *= I0 / (d * d);

    for (int t = 0; t < nt; ++t) {
      const auto& tri = base.triangles[t];
      for (int i = 0; i < 3; ++i)
        for (int li = 0; li < 2; ++li) {
          const int row = cyl.dof(tri[i], level + li);
          for (int j = 0; j < 3; ++j)
            for (int lj = 0; lj < 2; ++lj) {
              const double v = S[t](i, j) * W1(li, lj) + M[t](i, j) * W2(li, lj);
              trips.emplace_back(row, cyl.dof(tri[j], level + lj), v);
            }
        }
    }
  }

  SpMat A(cyl.num_dofs(), cyl.num_dofs());
  A.setFromTriplets(trips.begin(), trips.end());
  return SparseSymmetricMatrix(std::move(A));
}

ExtensionSolution solve_truncated_extension(const CylinderMesh& cyl, const Fn2d& f,
                                            double s, LinearSolver solver,
                                            double pcg_tol) {
  const SpMat A_full = assemble_weighted_stiffness(cyl, s).matrix();
  const int n = cyl.num_dofs();
  const int nb = cyl.base.num_nodes();

  std::vector<int> free_dofs;
  std::vector<int> to_compact(n, -1);
  for (int i = 0; i < n; ++i)
    if (!cyl.constrained[i]) {
      to_compact[i] = static_cast<int>(free_dofs.size());
      free_dofs.push_back(i);
    }
  const int nf = static_cast<int>(free_dofs.size());

  std::vector<Eigen::Triplet<double>> trips;
  for (int col = 0; col < A_full.outerSize(); ++col)
    for (SpMat::InnerIterator it(A_full, col); it; ++it) {
      const int r = to_compact[it.row()], c = to_compact[it.col()];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  SpMat A(nf, nf);
  A.setFromTriplets(trips.begin(), trips.end());

  ExtensionSolution sol;
  sol.ds = ds_constant(s);
  const Eigen::VectorXd F_base = assemble_load(cyl.base, f);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  for (int node = 0; node < nb; ++node) {
    const int c = to_compact[cyl.dof(node, 0)];
    if (c >= 0) rhs[c] = sol.ds * F_base[node];
  }

  Eigen::VectorXd x;
  if (solver == LinearSolver::Direct) {
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success)
      throw SolverFailure("solve_truncated_extension: factorization failed");
    x = ldlt.solve(rhs);
  } else {
    x = Eigen::VectorXd::Zero(nf);
    const auto res = pcg(A, rhs, x, pcg_tol, 20000);
    if (!res.converged)
      throw SolverFailure("solve_truncated_extension: cg stalled at residual " +
                          std::to_string(res.relative_residual));
  }

  sol.dofs = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < nf; ++c) sol.dofs[free_dofs[c]] = x[c];
  sol.trace = sol.dofs.head(nb);
  sol.load_trace = F_base.dot(sol.trace);
  sol.energy = x.dot(A * x);
  return sol;
}

double energy_error_squared(double exact_f_w, const ExtensionSolution& sol) {
  return std::max(0.0, sol.ds * (exact_f_w - sol.load_trace));
}

}  // namespace fraclap
