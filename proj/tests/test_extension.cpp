#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <fraclap/error_metrics.hpp>
#include <fraclap/extension.hpp>
#include <fraclap/quadrature.hpp>

using namespace fraclap;

namespace {

constexpr double kPi = 3.14159265358979323846;

// int_0^b y^alpha p(y) dy via the substitution y = t^4, which removes the
// endpoint singularity for alpha > -3/4; independent check of the closed-form
// moments
double graded_quad(const std::function<double(double)>& p, double /*a*/, double b,
                   double alpha) {
  const int panels = 64;
  const double tb = std::pow(b, 0.25);
  double acc = 0.0;
  for (int k = 0; k < panels; ++k) {
    for (const auto& gp : gauss8(tb * k / panels, tb * (k + 1) / panels)) {
      const double y = gp.x * gp.x * gp.x * gp.x;
      acc += gp.w * 4.0 * std::pow(gp.x, 4.0 * alpha + 3.0) * p(y);
    }
  }
  return acc;
}

CylinderMesh small_cylinder(int Mb, int Ma, double s, double Y = 1.0) {
  return tensor_cylinder(uniform_square_mesh(Mb), graded_interval(Ma, s, Y));
}

}  // namespace

TEST_CASE("extension scaling constant") {
  CHECK(ds_constant(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ds_constant(0.25) == doctest::Approx(0.4779887974861251).epsilon(1e-13));
  for (double s = 0.1; s < 0.95; s += 0.1) CHECK(ds_constant(s) > 0.0);
  CHECK_THROWS_AS(ds_constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ds_constant(1.0), std::invalid_argument);
}

TEST_CASE("weighted stiffness at s = 1/2 equals the unweighted tensor assembly") {
  const CylinderMesh cyl = small_cylinder(3, 3, 0.5);
  const SpMat A = assemble_weighted_stiffness(cyl, 0.5).matrix();

  // independent unweighted prism assembly: S_K (x) 1d mass + M_K (x) 1d stiffness
  const TriMesh& base = cyl.base;
  const SpMat Sb = assemble_stiffness(base).matrix();
  const SpMat Mb = assemble_mass(base).matrix();
  std::vector<Eigen::Triplet<double>> trips;
  for (int level = 0; level < cyl.axis.M; ++level) {
    const double d = cyl.axis.breakpoints[level + 1] - cyl.axis.breakpoints[level];
    const double mass1d[2][2] = {{d / 3, d / 6}, {d / 6, d / 3}};
    const double stiff1d[2][2] = {{1 / d, -1 / d}, {-1 / d, 1 / d}};
    for (int col = 0; col < Sb.outerSize(); ++col) {
      for (SpMat::InnerIterator it(Sb, col); it; ++it)
        for (int li = 0; li < 2; ++li)
          for (int lj = 0; lj < 2; ++lj)
            trips.emplace_back(cyl.dof(int(it.row()), level + li),
                               cyl.dof(int(it.col()), level + lj),
                               it.value() * mass1d[li][lj]);
      for (SpMat::InnerIterator it(Mb, col); it; ++it)
        for (int li = 0; li < 2; ++li)
          for (int lj = 0; lj < 2; ++lj)
            trips.emplace_back(cyl.dof(int(it.row()), level + li),
                               cyl.dof(int(it.col()), level + lj),
                               it.value() * stiff1d[li][lj]);
    }
  }
  SpMat ref(cyl.num_dofs(), cyl.num_dofs());
  ref.setFromTriplets(trips.begin(), trips.end());

  const SpMat diff = A - ref;
  double m = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SpMat::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
  CHECK(m < 1e-12);
}

TEST_CASE("weighted moments match graded-quadrature oracle") {
  // single prism over the unit right triangle, degenerate first cell [0, h]
  TriMesh base;
  base.nodes = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  base.triangles = {{0, 1, 2}};
  base.boundary_edges = {{0, 1}, {1, 2}, {2, 0}};
  base.boundary_node = {true, true, true};
  base.h = std::sqrt(2.0);
  for (double s : {0.25, 0.75}) {
    const double alpha = 1.0 - 2.0 * s;
    const CylinderMesh cyl = tensor_cylinder(base, graded_interval(1, s, 0.7));
    const SpMat A = assemble_weighted_stiffness(cyl, s).matrix();
    const double h = 0.7, d = h;
    // entry between node 0 at levels 0 and 1:
    // S(0,0) * int y^a (h-y)(y-0)/d^2 + M(0,0) * int y^a (-1/d)(1/d)
    const double S00 = 1.0, M00 = 0.5 / 6.0;
    const double w1 = graded_quad([&](double y) { return (h - y) * y / (d * d); }, 0.0,
                                  h, alpha);
    const double w2 = -graded_quad([](double) { return 1.0; }, 0.0, h, alpha) / (d * d);
    CHECK(A.coeff(cyl.dof(0, 0), cyl.dof(0, 1)) ==
          doctest::Approx(S00 * w1 + M00 * w2).epsilon(1e-8));
  }
}

TEST_CASE("reduced weighted stiffness is positive definite") {
  const CylinderMesh cyl = small_cylinder(4, 4, 0.3);
  const SpMat A = assemble_weighted_stiffness(cyl, 0.3).matrix();
  std::vector<int> free_dofs;
  for (int i = 0; i < cyl.num_dofs(); ++i)
    if (!cyl.constrained[i]) free_dofs.push_back(i);
  Eigen::MatrixXd R(free_dofs.size(), free_dofs.size());
  for (std::size_t r = 0; r < free_dofs.size(); ++r)
    for (std::size_t c = 0; c < free_dofs.size(); ++c)
      R(r, c) = A.coeff(free_dofs[r], free_dofs[c]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
  CHECK(es.eigenvalues()[0] > 0.0);
  CHECK(assemble_weighted_stiffness(cyl, 0.3).symmetry_defect() < 1e-13);
}

TEST_CASE("zero load gives the zero extension") {
  const CylinderMesh cyl = small_cylinder(4, 4, 0.6);
  const auto sol =
      solve_truncated_extension(cyl, [](double, double) { return 0.0; }, 0.6);
  CHECK(sol.dofs.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("galerkin energy identity") {
  const CylinderMesh cyl = small_cylinder(8, 8, 0.4);
  auto f = [](double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); };
  for (LinearSolver ls : {LinearSolver::Pcg, LinearSolver::Direct}) {
    const auto sol = solve_truncated_extension(cyl, f, 0.4, ls);
    CHECK(sol.energy == doctest::Approx(sol.ds * sol.load_trace).epsilon(1e-9));
    CHECK(sol.energy > 0.0);
  }
}

TEST_CASE("separation of variables at s = 1/2") {
  // f = phi_1 normalized: exact truncated solution on the cylinder is
  // sinh(sqrt(l)(Y-y)) phi_1 / (sqrt(l) cosh(sqrt(l) Y)), trace tanh(...)/sqrt(l)
  const double lam = 2 * kPi * kPi;
  auto f = [](double x, double y) { return 2.0 * std::sin(kPi * x) * std::sin(kPi * y); };
  auto exact_trace = [&](double x, double y) {
    return f(x, y) / std::sqrt(lam);  // untruncated limit
  };
  double prev = 1e300;
  std::vector<double> sizes, errs;
  for (int M : {4, 8, 16}) {
    const double Y = default_truncation_height(2ull * M * M * M);
    const CylinderMesh cyl = small_cylinder(M, M, 0.5, Y);
    const auto sol = solve_truncated_extension(cyl, f, 0.5);
    const double err = l2_error(cyl.base, sol.trace, exact_trace);
    CHECK(err < prev);
    prev = err;
    sizes.push_back(double(cyl.num_prisms()));
    errs.push_back(err);
  }
  CHECK(fit_rate(sizes, errs) < -0.25);
}

TEST_CASE("energy identity against the analytic truncated energy") {
  // s = 1/2, f = phi_1: d_s = 1 and a(W, W) = tanh(sqrt(l) Y)/sqrt(l) exactly
  const double lam = 2 * kPi * kPi;
  auto f = [](double x, double y) { return 2.0 * std::sin(kPi * x) * std::sin(kPi * y); };
  const double Y = 1.0;
  const CylinderMesh cyl = small_cylinder(16, 16, 0.5, Y);
  const auto sol = solve_truncated_extension(cyl, f, 0.5);
  const double exact_energy = std::tanh(std::sqrt(lam) * Y) / std::sqrt(lam);
  // identity value = a(W,W) - a(W_h,W_h) = squared energy error: small positive
  const double err2 = energy_error_squared(exact_energy, sol);
  CHECK(err2 > 0.0);
  CHECK(err2 < 0.05 * exact_energy);
}

TEST_CASE("energy error decays for the smooth benchmark load") {
  auto f = [](double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); };
  const double s = 0.4;
  const double exact_f_w = std::pow(8 * kPi * kPi, -s) / 4.0;
  std::vector<double> sizes, errs;
  for (int M : {4, 8, 16}) {
    const double Y = default_truncation_height(2ull * M * M * M);
    const CylinderMesh cyl = small_cylinder(M, M, s, Y);
    const auto sol = solve_truncated_extension(cyl, f, s);
    const double e2 = energy_error_squared(exact_f_w, sol);
    CHECK(e2 > 0.0);
    sizes.push_back(double(cyl.num_prisms()));
    errs.push_back(e2);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
  CHECK(fit_rate(sizes, errs) < -0.4);  // target about -2/3 for the square
}
