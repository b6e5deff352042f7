#include <doctest.h>

#include <cmath>
#include <sstream>

#include <fraclap/error_metrics.hpp>

using namespace fraclap;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("spectral-norm error via the discrete eigenbasis") {
  const TriMesh mesh = uniform_square_mesh(16);
  const EigenBasis b = fem_eigenbasis(mesh, LaplaceKind::Dirichlet, 12);

  CHECK(hs_error_via_eigen(Eigen::VectorXd::Zero(mesh.num_nodes()), b, 0.5) == 0.0);

  const double l1 = b.eigenvalues[0], l2 = b.eigenvalues[1];
  const Eigen::VectorXd e1 = b.vectors.col(0);
  CHECK(hs_error_via_eigen(e1, b, 0.5) ==
        doctest::Approx(std::sqrt(1.0 + std::sqrt(l1))).epsilon(1e-10));

  // formula degenerates to doubled L2 content at s = 0
  CHECK(hs_error_via_eigen(e1, b, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

  const double a = 0.7, c = -1.3;
  const Eigen::VectorXd e = a * b.vectors.col(0) + c * b.vectors.col(1);
  const double expect = std::sqrt(a * a + c * c + a * a * std::pow(l1, 0.4) +
                                  c * c * std::pow(l2, 0.4));
  CHECK(hs_error_via_eigen(e, b, 0.4) == doctest::Approx(expect).epsilon(1e-10));

  // monotone in s for eigenvalues >= 1
  double prev = 0.0;
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double v = hs_error_via_eigen(e, b, s);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("l2 error against closed-form references") {
  const TriMesh mesh = uniform_square_mesh(16);
  Eigen::VectorXd interp(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) interp[i] = mesh.nodes[i].x();
  CHECK(l2_error(mesh, interp, [](double x, double) { return x; }) < 1e-14);

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(mesh.num_nodes());
  CHECK(l2_error(mesh, zero,
                 [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); }) ==
        doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("interpolation error decays quadratically") {
  auto u = [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); };
  std::vector<double> hs, errs;
  for (int M : {8, 16, 32}) {
    const TriMesh mesh = uniform_square_mesh(M);
    Eigen::VectorXd interp(mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i)
      interp[i] = u(mesh.nodes[i].x(), mesh.nodes[i].y());
    hs.push_back(1.0 / M);
    errs.push_back(l2_error(mesh, interp, u));
  }
  const double rate = fit_rate(hs, errs);
  CHECK(rate > 1.9);
  CHECK(rate < 2.1);
}

TEST_CASE("rate fitting") {
  CHECK(fit_rate({1, 10, 100}, {1, 0.1, 0.01}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fit_rate({1, 100}, {1, 1}) == doctest::Approx(0.0).epsilon(1e-12));
  // scale invariance
  const double s1 = fit_rate({16, 64, 256}, {0.3, 0.11, 0.05});
  const double s2 = fit_rate({16, 64, 256}, {30, 11, 5});
  CHECK(s1 == doctest::Approx(s2).epsilon(1e-12));
  CHECK_THROWS_AS(fit_rate({1, 10}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_rate({1}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(fit_rate({2, 2, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("csv schema and determinism") {
  std::vector<ConvergenceRecord> recs(2);
  recs[0] = {"example1", 0.4, 8, 1024, 0.125, 0.5, 0.03, 1.5};
  recs[1] = {"example1", 0.6, 16, 8192, 0.0625, 0.25, 0.01, 3.25};
  std::ostringstream os1, os2;
  write_csv(os1, recs);
  write_csv(os2, recs);
  CHECK(os1.str() == os2.str());
  std::istringstream is(os1.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "kind,s,M,num_prisms,hs_error,l2_error,energy_error,seconds");
  std::string row;
  std::getline(is, row);
  CHECK(row == "example1,0.4,8,1024,0.125,0.5,0.03,1.5");
  int rows = 1;
  while (std::getline(is, row) && !row.empty()) ++rows;
  CHECK(rows == 2);
}
