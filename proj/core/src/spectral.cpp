#include "fraclap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace fraclap {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

int default_panels(const EigenBasis& basis) {
  int kmax = 1;
  for (const auto& m : basis.modes) kmax = std::max({kmax, m[0], m[1]});
  return std::max(32, 2 * (kmax + 1));
}

// Interior coefficients against the square Dirichlet/Neumann modes via a
// separable composite Gauss rule: O(Q^2 kmax + Q kmax^2) instead of a full
// per-mode 2d sweep.
Eigen::VectorXd square_interior_coefficients(const Fn2d& u, const EigenBasis& basis,
                                             int panels) {
  int kmax = 0;
  for (const auto& m : basis.modes) kmax = std::max({kmax, m[0], m[1]});
  const bool neumann = basis.rep == EigenBasis::Rep::SquareNeumann;

  std::vector<double> xs, ws;
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p)
    for (const auto& gp : gauss8(p * h, (p + 1) * h)) {
      xs.push_back(gp.x);
      ws.push_back(gp.w);
    }
  const int Q = static_cast<int>(xs.size());

  // trig tables per direction
  Eigen::MatrixXd S(kmax + 1, Q);
  for (int k = 0; k <= kmax; ++k)
    for (int q = 0; q < Q; ++q)
      S(k, q) = neumann ? std::cos(k * kPi * xs[q]) : std::sin(k * kPi * xs[q]);

  Eigen::MatrixXd Wu(Q, Q);
  for (int qx = 0; qx < Q; ++qx)
    for (int qy = 0; qy < Q; ++qy)
      Wu(qx, qy) = ws[qx] * ws[qy] * u(xs[qx], xs[qy]);

  // T(l, qx) = sum_qy S(l,qy) Wu(qx,qy)
  Eigen::MatrixXd T = S * Wu.transpose();

  Eigen::VectorXd coeffs(basis.count());
  for (int j = 0; j < basis.count(); ++j) {
    const int k = basis.modes[j][0], l = basis.modes[j][1];
    double norm;
    if (neumann)
      norm = (k == 0 ? 1.0 : kSqrt2) * (l == 0 ? 1.0 : kSqrt2);
    else
      norm = 2.0;
    coeffs[j] = norm * S.row(k).dot(T.row(l));
  }
  return coeffs;
}

// Quadrature of b(x,y) * (mode factor) over the four sides of the unit square.
double square_edge_integral(const Fn2d& b,
                            const std::function<double(int /*side*/, double /*t*/)>& mode,
                            int panels) {
  // side 0: y=0, 1: x=1, 2: y=1, 3: x=0; parameter t in [0,1] along the side
  double sum = 0.0;
  const double h = 1.0 / panels;
  for (int side = 0; side < 4; ++side) {
    for (int p = 0; p < panels; ++p) {
      for (const auto& gp : gauss8(p * h, (p + 1) * h)) {
        double x, y;
        switch (side) {
          case 0: x = gp.x; y = 0.0; break;
          case 1: x = 1.0; y = gp.x; break;
          case 2: x = gp.x; y = 1.0; break;
          default: x = 0.0; y = gp.x; break;
        }
        sum += gp.w * b(x, y) * mode(side, gp.x);
      }
    }
  }
  return sum;
}

}  // namespace

double EigenBasis::mode_value(int j, double x, double y) const {
  const int k = modes[j][0], l = modes[j][1];
  switch (rep) {
    case Rep::IntervalDirichlet:
      return kSqrt2 * std::sin(k * kPi * x);
    case Rep::SquareDirichlet:
      return 2.0 * std::sin(k * kPi * x) * std::sin(l * kPi * y);
    case Rep::SquareNeumann: {
      const double ck = (k == 0 ? 1.0 : kSqrt2), cl = (l == 0 ? 1.0 : kSqrt2);
      return ck * cl * std::cos(k * kPi * x) * std::cos(l * kPi * y);
    }
    case Rep::Fem:
      throw std::logic_error("mode_value: discrete modes are nodal, not closed-form");
  }
  return 0.0;
}

double EigenBasis::mode_normal_derivative(int j, double x, double y) const {
  const int k = modes[j][0], l = modes[j][1];
  const double sk = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^k
  const double sl = (l % 2 == 0) ? 1.0 : -1.0;
  switch (rep) {
    case Rep::IntervalDirichlet:
      if (near(x, 0.0)) return -kSqrt2 * k * kPi;
      if (near(x, 1.0)) return kSqrt2 * k * kPi * sk;
      throw std::invalid_argument("mode_normal_derivative: point not on {0,1}");
    case Rep::SquareDirichlet:
      if (near(y, 0.0)) return -2.0 * l * kPi * std::sin(k * kPi * x);
      if (near(y, 1.0)) return 2.0 * l * kPi * sl * std::sin(k * kPi * x);
      if (near(x, 0.0)) return -2.0 * k * kPi * std::sin(l * kPi * y);
      if (near(x, 1.0)) return 2.0 * k * kPi * sk * std::sin(l * kPi * y);
      throw std::invalid_argument("mode_normal_derivative: point not on the boundary");
    case Rep::SquareNeumann:
      return 0.0;
    case Rep::Fem:
      throw std::logic_error(
          "mode_normal_derivative: use the variational form for discrete modes");
  }
  return 0.0;
}

EigenBasis analytic_interval_dirichlet_basis(int m) {
  if (m < 1) throw std::invalid_argument("analytic_interval_dirichlet_basis: m >= 1");
  EigenBasis b;
  b.kind = LaplaceKind::Dirichlet;
  b.rep = EigenBasis::Rep::IntervalDirichlet;
  b.eigenvalues.resize(m);
  b.modes.resize(m);
  for (int k = 1; k <= m; ++k) {
    b.eigenvalues[k - 1] = double(k) * k * kPi * kPi;
    b.modes[k - 1] = {k, 0};
  }
  return b;
}

EigenBasis analytic_square_dirichlet_basis(int kmax) {
  if (kmax < 1) throw std::invalid_argument("analytic_square_dirichlet_basis: kmax >= 1");
  EigenBasis b;
  b.kind = LaplaceKind::Dirichlet;
  b.rep = EigenBasis::Rep::SquareDirichlet;
  for (int k = 1; k <= kmax; ++k)
    for (int l = 1; l <= kmax; ++l) b.modes.push_back({k, l});
  std::sort(b.modes.begin(), b.modes.end(), [](const auto& a, const auto& c) {
    const long la = long(a[0]) * a[0] + long(a[1]) * a[1];
    const long lc = long(c[0]) * c[0] + long(c[1]) * c[1];
    if (la != lc) return la < lc;
    return a < c;  // lexicographic tie-break
  });
  b.eigenvalues.reserve(b.modes.size());
  for (const auto& m : b.modes)
    b.eigenvalues.push_back(kPi * kPi * (double(m[0]) * m[0] + double(m[1]) * m[1]));
  return b;
}

EigenBasis analytic_square_neumann_basis(int kmax) {
  if (kmax < 0) throw std::invalid_argument("analytic_square_neumann_basis: kmax >= 0");
  EigenBasis b;
  b.kind = LaplaceKind::Neumann;
  b.rep = EigenBasis::Rep::SquareNeumann;
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= kmax; ++l) b.modes.push_back({k, l});
  std::sort(b.modes.begin(), b.modes.end(), [](const auto& a, const auto& c) {
    const long la = long(a[0]) * a[0] + long(a[1]) * a[1];
    const long lc = long(c[0]) * c[0] + long(c[1]) * c[1];
    if (la != lc) return la < lc;
    return a < c;
  });
  b.eigenvalues.reserve(b.modes.size());
  for (const auto& m : b.modes)
    b.eigenvalues.push_back(kPi * kPi * (double(m[0]) * m[0] + double(m[1]) * m[1]));
  return b;
}

namespace {

// Shift-invert subspace iteration for the smallest eigenpairs of the SPD
// pencil (A, M) on the free dofs. Returns M-orthonormal vectors.
void subspace_iteration(const SpMat& A, const SpMat& M, int m, double shift,
                        Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  const int n = static_cast<int>(A.rows());
  const int p = std::min(n, m + std::max(8, m / 5));

  SpMat K = A;
  if (shift != 0.0) K = A + shift * M;
  Eigen::SimplicialLDLT<SpMat> solver(K);
  if (solver.info() != Eigen::Success)
    throw SolverFailure("fem_eigenbasis: factorization of the shifted pencil failed");

  std::mt19937 rng(12345);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd V(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) V(i, j) = dist(rng);

  const double tol = 1e-10;
  Eigen::VectorXd theta;
  double worst = 1.0;
  for (int iter = 0; iter < 300; ++iter) {
    Eigen::MatrixXd Z = solver.solve(M * V);
    // M-orthonormalize via the Cholesky factor of the Gram matrix
    Eigen::MatrixXd G = Z.transpose() * (M * Z);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success)
      throw SolverFailure("fem_eigenbasis: Gram matrix lost positive definiteness");
    V = llt.matrixU().transpose().solve(Z.transpose()).transpose();
    // Rayleigh-Ritz in the original pencil
    Eigen::MatrixXd H = V.transpose() * (A * V);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    theta = es.eigenvalues();
    V = V * es.eigenvectors();

    worst = 0.0;
    for (int k = 0; k < m; ++k) {
      const Eigen::VectorXd Av = A * V.col(k);
      const Eigen::VectorXd Mv = M * V.col(k);
      const double denom = Av.norm() + std::abs(theta[k]) * Mv.norm() + 1e-300;
      worst = std::max(worst, (Av - theta[k] * Mv).norm() / denom);
    }
    if (worst < tol) break;
  }
  if (worst >= tol)
    throw SolverFailure("fem_eigenbasis: eigen-iteration stalled, residual " +
                        std::to_string(worst));
  values = theta.head(m);
  vectors = V.leftCols(m);
}

}  // namespace

EigenBasis fem_eigenbasis(const TriMesh& mesh, LaplaceKind kind, int m) {
  const SpMat A_full = assemble_stiffness(mesh).matrix();
  const SpMat M_full = assemble_mass(mesh).matrix();
  const int n = mesh.num_nodes();

  std::vector<int> free_nodes;
  std::vector<int> to_compact(n, -1);
  for (int i = 0; i < n; ++i) {
    if (kind == LaplaceKind::Neumann || !mesh.boundary_node[i]) {
      to_compact[i] = static_cast<int>(free_nodes.size());
      free_nodes.push_back(i);
    }
  }
  const int nf = static_cast<int>(free_nodes.size());
  if (m < 1 || m > nf)
    throw std::invalid_argument("fem_eigenbasis: need 1 <= m <= free dof count");

  auto restrict_matrix = [&](const SpMat& X) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int col = 0; col < X.outerSize(); ++col)
      for (SpMat::InnerIterator it(X, col); it; ++it) {
        const int r = to_compact[it.row()], c = to_compact[it.col()];
        if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
      }
    SpMat out(nf, nf);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
  };
  const SpMat A = restrict_matrix(A_full);
  const SpMat M = restrict_matrix(M_full);

  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  if (nf <= 1200) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges{
        Eigen::MatrixXd(A), Eigen::MatrixXd(M)};
    if (ges.info() != Eigen::Success)
      throw SolverFailure("fem_eigenbasis: dense generalized eigensolver failed");
    values = ges.eigenvalues().head(m);
    vectors = ges.eigenvectors().leftCols(m);
  } else {
    const double shift = (kind == LaplaceKind::Neumann) ? 1.0 : 0.0;
    subspace_iteration(A, M, m, shift, values, vectors);
  }

  // stabilize clustered eigenvectors: modified Gram-Schmidt in the M-inner
  // product within near-degenerate groups, then deterministic sign
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd v = vectors.col(k);
    for (int j = k - 1; j >= 0; --j) {
      if (std::abs(values[j] - values[k]) > 1e-8 * std::max(1.0, std::abs(values[k])))
        break;
      v -= vectors.col(j).dot(M * v) * vectors.col(j);
    }
    v /= std::sqrt(v.dot(M * v));
    int imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0) v = -v;
    vectors.col(k) = v;
  }

  EigenBasis b;
  b.kind = kind;
  b.rep = EigenBasis::Rep::Fem;
  b.eigenvalues.assign(values.data(), values.data() + m);
  b.mesh = std::make_shared<TriMesh>(mesh);
  b.stiffness = A_full;
  b.mass = M_full;
  b.domain_measure = mesh.total_area();
  b.vectors = Eigen::MatrixXd::Zero(n, m);
  for (int c = 0; c < nf; ++c) b.vectors.row(free_nodes[c]) = vectors.row(c);
  b.modes.assign(m, {0, 0});
  return b;
}

SpectralCoefficients expand(const Fn2d& u, const EigenBasis& basis, int panels) {
  if (!basis.is_analytic())
    throw std::invalid_argument("expand: use expand_fem for discrete bases");
  if (panels <= 0) panels = default_panels(basis);

  SpectralCoefficients c;
  c.basis = &basis;
  const int m = basis.count();
  c.interior.resize(m);
  c.boundary = Eigen::VectorXd::Zero(m);

  if (basis.rep == EigenBasis::Rep::IntervalDirichlet) {
    for (int j = 0; j < m; ++j) {
      const int k = basis.modes[j][0];
      c.interior[j] = integrate_1d(
          [&](double x) { return u(x, 0.0) * kSqrt2 * std::sin(k * kPi * x); }, 0.0, 1.0,
          panels);
      c.boundary[j] = u(0.0, 0.0) * basis.mode_normal_derivative(j, 0.0) +
                      u(1.0, 0.0) * basis.mode_normal_derivative(j, 1.0);
    }
    return c;
  }

  c.interior = square_interior_coefficients(u, basis, panels);
  if (basis.rep == EigenBasis::Rep::SquareDirichlet) {
    for (int j = 0; j < m; ++j) {
      const int k = basis.modes[j][0], l = basis.modes[j][1];
      const double sk = (k % 2 == 0) ? 1.0 : -1.0;
      const double sl = (l % 2 == 0) ? 1.0 : -1.0;
      c.boundary[j] = square_edge_integral(
          u,
          [&](int side, double t) {
            switch (side) {
              case 0: return -2.0 * l * kPi * std::sin(k * kPi * t);
              case 1: return 2.0 * k * kPi * sk * std::sin(l * kPi * t);
              case 2: return 2.0 * l * kPi * sl * std::sin(k * kPi * t);
              default: return -2.0 * k * kPi * std::sin(l * kPi * t);
            }
          },
          panels);
    }
  }
  return c;
}

SpectralCoefficients expand_neumann(const Fn2d& u, const Fn2d& dnu,
                                    const EigenBasis& basis, int panels) {
  if (basis.rep != EigenBasis::Rep::SquareNeumann)
    throw std::invalid_argument("expand_neumann: needs the square Neumann basis");
  if (panels <= 0) panels = default_panels(basis);

  SpectralCoefficients c;
  c.basis = &basis;
  c.interior = square_interior_coefficients(u, basis, panels);
  c.boundary.resize(basis.count());
  for (int j = 0; j < basis.count(); ++j) {
    const int k = basis.modes[j][0], l = basis.modes[j][1];
    const double ck = (k == 0 ? 1.0 : kSqrt2), cl = (l == 0 ? 1.0 : kSqrt2);
    c.boundary[j] = square_edge_integral(
        dnu,
        [&](int side, double t) {
          switch (side) {
            case 0: return ck * cl * std::cos(k * kPi * t);
            case 1: return ck * cl * ((k % 2 == 0) ? 1.0 : -1.0) * std::cos(l * kPi * t);
            case 2: return ck * cl * ((l % 2 == 0) ? 1.0 : -1.0) * std::cos(k * kPi * t);
            default: return ck * cl * std::cos(l * kPi * t);
          }
        },
        panels);
  }
  c.conormal_integral =
      square_edge_integral(dnu, [](int, double) { return 1.0; }, panels);
  return c;
}

SpectralCoefficients expand_fem(const Eigen::VectorXd& nodal, const EigenBasis& basis) {
  if (basis.rep != EigenBasis::Rep::Fem)
    throw std::invalid_argument("expand_fem: needs a discrete basis");
  SpectralCoefficients c;
  c.basis = &basis;
  c.interior = basis.vectors.transpose() * (basis.mass * nodal);
  c.boundary = Eigen::VectorXd::Zero(basis.count());
  if (basis.kind == LaplaceKind::Dirichlet) {
    const auto& mesh = *basis.mesh;
    for (int k = 0; k < basis.count(); ++k) {
      const Eigen::VectorXd w = basis.stiffness * basis.vectors.col(k) -
                                basis.eigenvalues[k] * (basis.mass * basis.vectors.col(k));
      double sum = 0.0;
      for (int i = 0; i < mesh.num_nodes(); ++i)
        if (mesh.boundary_node[i]) sum += nodal[i] * w[i];
      c.boundary[k] = sum;
    }
  }
  return c;
}

SpectralCoefficients expand_constant_interval(double value, const EigenBasis& basis) {
  if (basis.rep != EigenBasis::Rep::IntervalDirichlet)
    throw std::invalid_argument("expand_constant_interval: interval basis only");
  SpectralCoefficients c;
  c.basis = &basis;
  const int m = basis.count();
  c.interior = Eigen::VectorXd::Zero(m);
  c.boundary = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < m; ++j) {
    const int k = basis.modes[j][0];
    if (k % 2 == 0) continue;
    c.interior[j] = kSqrt2 * 2.0 * value / (k * kPi);
    // equals -sqrt(2) * 2 * value * k * pi; written as -lambda * u_k so the
    // per-mode cancellation of the nonzero-data operator is exact in fp
    c.boundary[j] = -(basis.eigenvalues[j] * c.interior[j]);
  }
  return c;
}

SpectralCoefficients apply_frac_dirichlet(const SpectralCoefficients& c, double s) {
  if (!(s > 0.0 && s <= 1.0))
    throw std::invalid_argument("apply_frac_dirichlet: s must lie in (0,1]");
  SpectralCoefficients out;
  out.basis = c.basis;
  const int m = static_cast<int>(c.interior.size());
  out.interior.resize(m);
  out.boundary = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < m; ++k) {
    const double lambda = c.basis->eigenvalues[k];
    // lambda^{s-1} (lambda u_int + u_bdry) == lambda^s u_int + lambda^{s-1} u_bdry
    out.interior[k] = std::pow(lambda, s - 1.0) * (lambda * c.interior[k] + c.boundary[k]);
  }
  return out;
}

SpectralCoefficients apply_frac_dirichlet_zero(const SpectralCoefficients& c, double s) {
  if (!(s > 0.0 && s <= 1.0))
    throw std::invalid_argument("apply_frac_dirichlet_zero: s must lie in (0,1]");
  SpectralCoefficients out;
  out.basis = c.basis;
  const int m = static_cast<int>(c.interior.size());
  out.interior.resize(m);
  out.boundary = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < m; ++k)
    out.interior[k] = std::pow(c.basis->eigenvalues[k], s) * c.interior[k];
  return out;
}

SpectralCoefficients apply_frac_neumann(const SpectralCoefficients& c, double s,
                                        double conormal_integral) {
  if (!(s > 0.0 && s <= 1.0))
    throw std::invalid_argument("apply_frac_neumann: s must lie in (0,1]");
  SpectralCoefficients out;
  out.basis = c.basis;
  const int m = static_cast<int>(c.interior.size());
  out.interior = Eigen::VectorXd::Zero(m);
  out.boundary = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < m; ++k) {
    const double mu = c.basis->eigenvalues[k];
    if (mu < 1e-12) continue;  // k = 1 term excluded
    out.interior[k] =
        std::pow(mu, s) * c.interior[k] - std::pow(mu, s - 1.0) * c.boundary[k];
  }
  out.offset = -conormal_integral / c.basis->domain_measure;
  return out;
}

SpectralCoefficients semigroup_compose(const SpectralCoefficients& c, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("semigroup_compose: s must lie in (0,1)");
  // the intermediate (-Lap_D)^{1-s} u has zero trace, so the second factor
  // acts as the zero-boundary operator
  return apply_frac_dirichlet_zero(apply_frac_dirichlet(c, 1.0 - s), s);
}

std::vector<double> divergent_norm_partial_sums(double t, int l) {
  if (t < 0.5) throw std::invalid_argument("divergent_norm_partial_sums: t >= 1/2");
  if (l < 1) throw std::invalid_argument("divergent_norm_partial_sums: l >= 1");
  std::vector<double> sums(l);
  const double factor = 4.0 * std::pow(kPi, 2.0 * t - 2.0);
  double acc = 0.0;
  for (int k = 1; k <= l; ++k) {
    acc += std::pow(2.0 * k - 1.0, 2.0 * t - 2.0);
    sums[k - 1] = factor * acc;
  }
  return sums;
}

}  // namespace fraclap
