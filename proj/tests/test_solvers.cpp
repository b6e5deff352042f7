#include <doctest.h>

#include <cmath>

#include <fraclap/error_metrics.hpp>
#include <fraclap/solvers.hpp>

using namespace fraclap;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("dirichlet composite: affine data reproduced exactly") {
  FractionalProblemSpec spec;
  spec.s = 0.5;
  spec.f = named_function("zero");
  spec.g = {named_function("affine"), Smoothness::Smooth};
  spec.M = 8;
  const auto sol = solve_dirichlet_problem(spec);
  for (int i = 0; i < sol.mesh->num_nodes(); ++i)
    CHECK(sol.u[i] ==
          doctest::Approx(sol.mesh->nodes[i].x() + sol.mesh->nodes[i].y()).epsilon(1e-10));
  CHECK(sol.w.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(sol.num_prisms == 2ull * 8 * 8 * 8);
}

TEST_CASE("dirichlet composite: boundary values equal the projected trace") {
  FractionalProblemSpec spec;
  spec.s = 0.3;
  spec.f = named_function("sin_product");
  spec.g = {named_function("affine"), Smoothness::Smooth};
  spec.M = 8;
  const auto sol = solve_dirichlet_problem(spec);
  const Eigen::VectorXd pg = l2_boundary_projection(spec.g, *sol.mesh);
  for (int i = 0; i < sol.mesh->num_nodes(); ++i)
    if (sol.mesh->boundary_node[i]) CHECK(sol.u[i] == doctest::Approx(pg[i]).epsilon(1e-12));
}

TEST_CASE("dirichlet composite: zero-boundary part converges to the spectral solution") {
  FractionalProblemSpec spec;
  spec.s = 0.6;
  spec.f = named_function("sin_product");
  spec.g = {named_function("zero"), Smoothness::Smooth};
  const double factor = std::pow(8 * kPi * kPi, -spec.s);
  auto exact = [&](double x, double y) {
    return factor * std::sin(2 * kPi * x) * std::sin(2 * kPi * y);
  };
  double prev = 1e300;
  for (int M : {8, 16}) {
    spec.M = M;
    const auto sol = solve_dirichlet_problem(spec);
    const double err = l2_error(*sol.mesh, sol.u, exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.02 * factor);
}

TEST_CASE("dirichlet composite is linear in the data") {
  FractionalProblemSpec both, fonly, gonly;
  for (auto* sp : {&both, &fonly, &gonly}) {
    sp->s = 0.4;
    sp->M = 8;
  }
  both.f = fonly.f = named_function("sin_product");
  gonly.f = named_function("zero");
  both.g = gonly.g = {named_function("affine"), Smoothness::Smooth};
  fonly.g = {named_function("zero"), Smoothness::Smooth};
  const auto sb = solve_dirichlet_problem(both);
  const auto sf = solve_dirichlet_problem(fonly);
  const auto sg = solve_dirichlet_problem(gonly);
  CHECK((sb.u - sf.u - sg.u).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("neumann composite: trivial and incompatible data") {
  FractionalProblemSpec spec;
  spec.kind = LaplaceKind::Neumann;
  spec.s = 0.5;
  spec.M = 8;
  spec.m = 40;
  spec.f = named_function("zero");
  spec.g = {named_function("zero"), Smoothness::Smooth};
  const auto sol = solve_neumann_problem(spec);
  CHECK(sol.u.lpNorm<Eigen::Infinity>() < 1e-11);

  spec.g = {named_function("one"), Smoothness::Smooth};
  CHECK_THROWS_AS(solve_neumann_problem(spec), CompatibilityViolation);
}

TEST_CASE("neumann composite: cosine benchmark") {
  FractionalProblemSpec spec;
  spec.kind = LaplaceKind::Neumann;
  spec.s = 0.5;
  spec.f = named_function("cos_x1");  // 2 cos(pi x1), zero mean
  spec.g = {named_function("zero"), Smoothness::Smooth};
  spec.m = 200;
  auto exact = [&](double x, double) {
    return std::pow(kPi * kPi, -spec.s) * 2.0 * std::cos(kPi * x);
  };
  double prev = 1e300;
  for (int M : {16, 32}) {
    spec.M = M;
    const auto sol = solve_neumann_problem(spec);
    // zero-mean membership of the spectral part
    const auto Mm = assemble_mass(*sol.mesh);
    const double mean =
        Eigen::VectorXd::Ones(sol.mesh->num_nodes()).dot(Mm.matrix() * sol.w);
    CHECK(std::abs(mean) < 1e-12);
    CHECK(sol.tail_indicator < 1e-6);
    CHECK_FALSE(sol.tail_warning);
    const double err = l2_error(*sol.mesh, sol.u, exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 5e-3);
}

TEST_CASE("neumann composite accepts a precomputed eigenbasis") {
  const TriMesh mesh = uniform_square_mesh(12);
  const EigenBasis basis = fem_eigenbasis(mesh, LaplaceKind::Neumann, 60);
  FractionalProblemSpec spec;
  spec.kind = LaplaceKind::Neumann;
  spec.s = 0.7;
  spec.f = named_function("cos_x1");
  spec.g = {named_function("zero"), Smoothness::Smooth};
  const auto a = solve_neumann_problem(spec, &basis);
  spec.M = 12;
  spec.m = 60;
  const auto b = solve_neumann_problem(spec);
  CHECK((a.u - b.u).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("problem-file parsing") {
  const std::string good = R"({
    "kind": "dirichlet", "s": 0.4, "f": "sin_product", "g": "affine",
    "M": 16, "gamma_safety": 1.2, "Y": 1.5, "m": 120
  })";
  const auto spec = parse_problem_json(good);
  CHECK(spec.kind == LaplaceKind::Dirichlet);
  CHECK(spec.s == 0.4);
  CHECK(spec.M == 16);
  CHECK(spec.gamma_safety == 1.2);
  CHECK(spec.Y == 1.5);
  CHECK(spec.m == 120);
  CHECK(spec.f(0.25, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spec.g(0.5, 0.0) == doctest::Approx(0.5).epsilon(1e-12));

  const auto poly = parse_problem_json(
      R"({"kind":"neumann","s":0.5,"f":{"poly":[[2,1,0],[1,0,2]]},"g":"zero"})");
  CHECK(poly.kind == LaplaceKind::Neumann);
  CHECK(poly.f(0.5, 0.5) == doctest::Approx(2 * 0.5 + 0.25).epsilon(1e-12));

  const auto trig = parse_problem_json(
      R"({"kind":"dirichlet","s":0.5,"f":{"sin_sin":[2,2]},"g":{"cos_cos":[1,0]}})");
  CHECK(trig.f(0.25, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trig.g(1.0, 0.3) == doctest::Approx(-1.0).epsilon(1e-12));

  CHECK_THROWS_AS(parse_problem_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_problem_json(R"({"kind":"robin","s":0.5,"f":"zero","g":"zero"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_problem_json(R"({"kind":"dirichlet","s":1.5,"f":"zero","g":"zero"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_problem_json(R"({"kind":"dirichlet","s":0.5,"f":"zero"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_problem_json(R"({"kind":"dirichlet","s":0.5,"f":"wat","g":"zero"})"),
                  std::invalid_argument);
}

TEST_CASE("named corner datum matches its polar formula") {
  const Fn2d g = named_function("corner_singular");
  CHECK(g(0.0, 0.0) == 0.0);
  const double r = 0.5, th = kPi / 4;
  CHECK(g(r * std::cos(th), r * std::sin(th)) ==
        doctest::Approx(std::pow(r, 0.4999) * std::sin(0.4999 * th)).epsilon(1e-12));
}
