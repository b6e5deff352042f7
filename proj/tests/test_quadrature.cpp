#include <doctest.h>

#include <cmath>

#include <fraclap/quadrature.hpp>

using namespace fraclap;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("triangle rule integrates degree-5 monomials exactly") {
  const Eigen::Vector2d a(0, 0), b(1, 0), c(0, 1);
  const auto rule = triangle_rule(a, b, c);

  double wsum = 0.0;
  for (const auto& qp : rule) wsum += qp.w;
  CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));

  // int over the unit right triangle of x^p y^q = p! q! / (p+q+2)!
  auto integrate = [&](int p, int q) {
    double acc = 0.0;
    for (const auto& qp : rule)
      acc += qp.w * std::pow(qp.x.x(), p) * std::pow(qp.x.y(), q);
    return acc;
  };
  CHECK(integrate(2, 3) == doctest::Approx(1.0 / 420).epsilon(1e-12));  // 2!3!/7!
  CHECK(integrate(5, 0) == doctest::Approx(1.0 / 42).epsilon(1e-12));   // 5!/7!
  CHECK(integrate(1, 1) == doctest::Approx(1.0 / 24).epsilon(1e-12));
}

TEST_CASE("triangle rule respects affine maps") {
  const Eigen::Vector2d a(1, 1), b(3, 1), c(1, 4);
  const auto rule = triangle_rule(a, b, c);
  double wsum = 0.0, acc = 0.0;
  for (const auto& qp : rule) {
    wsum += qp.w;
    acc += qp.w;  // constant 1
  }
  CHECK(wsum == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(acc == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("gauss rules hit their degree") {
  double acc = 0.0;
  for (const auto& gp : gauss4(0.0, 1.0)) acc += gp.w * std::pow(gp.x, 7);
  CHECK(acc == doctest::Approx(1.0 / 8).epsilon(1e-13));

  acc = 0.0;
  for (const auto& gp : gauss8(0.0, 1.0)) acc += gp.w * std::pow(gp.x, 15);
  CHECK(acc == doctest::Approx(1.0 / 16).epsilon(1e-13));

  acc = 0.0;
  for (const auto& gp : gauss4(2.0, 5.0)) acc += gp.w;
  CHECK(acc == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("composite rules") {
  CHECK(integrate_1d([](double x) { return std::sin(kPi * x); }, 0.0, 1.0, 4) ==
        doctest::Approx(2.0 / kPi).epsilon(1e-13));
  CHECK(integrate_unit_square(
            [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); }, 4) ==
        doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-13));
}
