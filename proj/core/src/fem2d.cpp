#include "fraclap/fem2d.hpp"

#include <cmath>
#include <unordered_map>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace fraclap {
namespace {

using Triplet = Eigen::Triplet<double>;

struct ElementGeometry {
  double area;
  Eigen::Vector2d grad[3];  // gradients of the three hat functions
};

ElementGeometry element_geometry(const TriMesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Eigen::Vector2d a = mesh.nodes[tri[0]];
  const Eigen::Vector2d b = mesh.nodes[tri[1]];
  const Eigen::Vector2d c = mesh.nodes[tri[2]];
  ElementGeometry g;
  const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
  g.area = 0.5 * det;
  g.grad[0] = Eigen::Vector2d(b.y() - c.y(), c.x() - b.x()) / det;
  g.grad[1] = Eigen::Vector2d(c.y() - a.y(), a.x() - c.x()) / det;
  g.grad[2] = Eigen::Vector2d(a.y() - b.y(), b.x() - a.x()) / det;
  return g;
}

}  // namespace

SparseSymmetricMatrix assemble_stiffness(const TriMesh& mesh) {
  std::vector<Triplet> trips;
  trips.reserve(9u * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto geo = element_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trips.emplace_back(tri[i], tri[j], geo.area * geo.grad[i].dot(geo.grad[j]));
  }
  SpMat A(mesh.num_nodes(), mesh.num_nodes());
  A.setFromTriplets(trips.begin(), trips.end());
  return SparseSymmetricMatrix(std::move(A));
}

SparseSymmetricMatrix assemble_mass(const TriMesh& mesh) {
  std::vector<Triplet> trips;
  trips.reserve(9u * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = mesh.signed_area(t);
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trips.emplace_back(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
  }
  SpMat M(mesh.num_nodes(), mesh.num_nodes());
  M.setFromTriplets(trips.begin(), trips.end());
  return SparseSymmetricMatrix(std::move(M));
}

Eigen::VectorXd assemble_load(const TriMesh& mesh, const Fn2d& f) {
  Eigen::VectorXd F = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector2d a = mesh.nodes[tri[0]];
    const Eigen::Vector2d b = mesh.nodes[tri[1]];
    const Eigen::Vector2d c = mesh.nodes[tri[2]];
    for (const auto& qp : triangle_rule(a, b, c)) {
      const double fv = f(qp.x.x(), qp.x.y());
      // barycentric coordinates of qp are the hat values
      const double det = 2.0 * mesh.signed_area(t);
      const double l1 = ((b.x() - qp.x.x()) * (c.y() - qp.x.y()) -
                         (c.x() - qp.x.x()) * (b.y() - qp.x.y())) / det;
      const double l2 = ((c.x() - qp.x.x()) * (a.y() - qp.x.y()) -
                         (a.x() - qp.x.x()) * (c.y() - qp.x.y())) / det;
      const double l3 = 1.0 - l1 - l2;
      F[tri[0]] += qp.w * fv * l1;
      F[tri[1]] += qp.w * fv * l2;
      F[tri[2]] += qp.w * fv * l3;
    }
  }
  return F;
}

double integrate(const TriMesh& mesh, const Fn2d& f) {
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (const auto& qp : triangle_rule(mesh.nodes[tri[0]], mesh.nodes[tri[1]],
                                        mesh.nodes[tri[2]]))
      sum += qp.w * f(qp.x.x(), qp.x.y());
  }
  return sum;
}

double integrate_boundary(const TriMesh& mesh, const Fn2d& g) {
  double sum = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    const Eigen::Vector2d a = mesh.nodes[e[0]];
    const Eigen::Vector2d b = mesh.nodes[e[1]];
    const double len = (b - a).norm();
    for (const auto& gp : gauss4(0.0, 1.0)) {
      const Eigen::Vector2d p = a + gp.x * (b - a);
      sum += gp.w * len * g(p.x(), p.y());
    }
  }
  return sum;
}

double eval_p1(const TriMesh& mesh, const Eigen::VectorXd& u, int t,
               const Eigen::Vector2d& p) {
  const auto& tri = mesh.triangles[t];
  const Eigen::Vector2d a = mesh.nodes[tri[0]];
  const Eigen::Vector2d b = mesh.nodes[tri[1]];
  const Eigen::Vector2d c = mesh.nodes[tri[2]];
  const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
  const double l1 =
      ((b.x() - p.x()) * (c.y() - p.y()) - (c.x() - p.x()) * (b.y() - p.y())) / det;
  const double l2 =
      ((c.x() - p.x()) * (a.y() - p.y()) - (a.x() - p.x()) * (c.y() - p.y())) / det;
  return l1 * u[tri[0]] + l2 * u[tri[1]] + (1.0 - l1 - l2) * u[tri[2]];
}

Eigen::VectorXd l2_boundary_projection(const BoundaryDatum& g, const TriMesh& mesh) {
  // compact index for boundary nodes
  std::unordered_map<int, int> to_compact;
  std::vector<int> to_global;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.boundary_node[i]) {
      to_compact[i] = static_cast<int>(to_global.size());
      to_global.push_back(i);
    }
  }
  const int nb = static_cast<int>(to_global.size());

  std::vector<Triplet> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nb);
  for (const auto& e : mesh.boundary_edges) {
    const int i0 = to_compact.at(e[0]);
    const int i1 = to_compact.at(e[1]);
    const Eigen::Vector2d a = mesh.nodes[e[0]];
    const Eigen::Vector2d b = mesh.nodes[e[1]];
    const double len = (b - a).norm();
    trips.emplace_back(i0, i0, len / 3.0);
    trips.emplace_back(i1, i1, len / 3.0);
    trips.emplace_back(i0, i1, len / 6.0);
    trips.emplace_back(i1, i0, len / 6.0);
    for (const auto& gp : gauss4(0.0, 1.0)) {
      const Eigen::Vector2d p = a + gp.x * (b - a);
      const double gv = g(p.x(), p.y());
      rhs[i0] += gp.w * len * gv * (1.0 - gp.x);
      rhs[i1] += gp.w * len * gv * gp.x;
    }
  }
  SpMat B(nb, nb);
  B.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLLT<SpMat> llt(B);
  if (llt.info() != Eigen::Success)
    throw SolverFailure("l2_boundary_projection: boundary mass factorization failed");
  const Eigen::VectorXd sol = llt.solve(rhs);

  Eigen::VectorXd full = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int c = 0; c < nb; ++c) full[to_global[c]] = sol[c];
  return full;
}

Eigen::VectorXd solve_dirichlet_lift(const TriMesh& mesh, const BoundaryDatum& g,
                                     LinearSolver solver) {
  const Eigen::VectorXd gb = l2_boundary_projection(g, mesh);
  const SparseSymmetricMatrix A_form = assemble_stiffness(mesh);
  const SpMat& A = A_form.matrix();

  // interior numbering
  std::vector<int> interior;
  std::vector<int> to_compact(mesh.num_nodes(), -1);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (!mesh.boundary_node[i]) {
      to_compact[i] = static_cast<int>(interior.size());
      interior.push_back(i);
    }
  }
  const int ni = static_cast<int>(interior.size());
  if (ni == 0) return gb;

  std::vector<Triplet> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
  for (int col = 0; col < A.outerSize(); ++col) {
    for (SpMat::InnerIterator it(A, col); it; ++it) {
      const int ic = to_compact[it.row()];
      if (ic < 0) continue;
      const int jc = to_compact[it.col()];
      if (jc >= 0)
        trips.emplace_back(ic, jc, it.value());
      else
        rhs[ic] -= it.value() * gb[it.col()];
    }
  }
  SpMat Aii(ni, ni);
  Aii.setFromTriplets(trips.begin(), trips.end());

  Eigen::VectorXd sol;
  if (solver == LinearSolver::Pcg) {
    sol = Eigen::VectorXd::Zero(ni);
    const auto res = pcg(Aii, rhs, sol, 1e-12, 10 * ni + 200);
    if (!res.converged)
      throw SolverFailure("solve_dirichlet_lift: CG stalled at relative residual " +
                          std::to_string(res.relative_residual));
  } else {
    Eigen::SimplicialLLT<SpMat> llt(Aii);
    if (llt.info() != Eigen::Success)
      throw SolverFailure("solve_dirichlet_lift: Cholesky factorization failed");
    sol = llt.solve(rhs);
  }

  Eigen::VectorXd full = gb;
  for (int c = 0; c < ni; ++c) full[interior[c]] = sol[c];
  return full;
}

Eigen::VectorXd solve_neumann_lift(const TriMesh& mesh, const BoundaryDatum& g,
                                   double fbar, LinearSolver solver) {
  const double area = mesh.total_area();
  const double boundary_integral = integrate_boundary(mesh, g.value);
  const double defect = area * fbar + boundary_integral;
  if (std::abs(defect) > 1e-10)
    throw CompatibilityViolation(
        "solve_neumann_lift: |Omega|*fbar + int_boundary g = " + std::to_string(defect));

  const SparseSymmetricMatrix A_form = assemble_stiffness(mesh);
  const SparseSymmetricMatrix M_form = assemble_mass(mesh);
  const SpMat& A = A_form.matrix();
  const SpMat& M = M_form.matrix();
  const int n = mesh.num_nodes();

  Eigen::VectorXd rhs = fbar * (M * Eigen::VectorXd::Ones(n));
  for (const auto& e : mesh.boundary_edges) {
    const Eigen::Vector2d a = mesh.nodes[e[0]];
    const Eigen::Vector2d b = mesh.nodes[e[1]];
    const double len = (b - a).norm();
    for (const auto& gp : gauss4(0.0, 1.0)) {
      const Eigen::Vector2d p = a + gp.x * (b - a);
      const double gv = g(p.x(), p.y());
      rhs[e[0]] += gp.w * len * gv * (1.0 - gp.x);
      rhs[e[1]] += gp.w * len * gv * gp.x;
    }
  }
  // keep the singular system consistent
  rhs.array() -= rhs.sum() / n;

  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  if (solver == LinearSolver::Pcg) {
    auto project = [n](Eigen::VectorXd& r) { r.array() -= r.sum() / n; };
    const auto res = pcg(A, rhs, v, 1e-12, 10 * n + 200, project);
    if (!res.converged)
      throw SolverFailure("solve_neumann_lift: CG stalled at relative residual " +
                          std::to_string(res.relative_residual));
  } else {
    // Lagrange multiplier for the mean constraint
    std::vector<Triplet> trips;
    for (int col = 0; col < A.outerSize(); ++col)
      for (SpMat::InnerIterator it(A, col); it; ++it)
        trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    const Eigen::VectorXd m = M * Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i) {
      trips.emplace_back(i, n, m[i]);
      trips.emplace_back(n, i, m[i]);
    }
    SpMat K(n + 1, n + 1);
    K.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<SpMat> lu(K);
    if (lu.info() != Eigen::Success)
      throw SolverFailure("solve_neumann_lift: LU factorization failed");
    Eigen::VectorXd rhs_aug(n + 1);
    rhs_aug.head(n) = rhs;
    rhs_aug[n] = 0.0;
    v = lu.solve(rhs_aug).head(n);
  }

  // enforce the zero-mean normalization exactly
  const Eigen::VectorXd m = M * Eigen::VectorXd::Ones(n);
  v.array() -= v.dot(m) / area;
  return v;
}

}  // namespace fraclap
