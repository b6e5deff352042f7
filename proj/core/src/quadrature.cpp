#include "fraclap/quadrature.hpp"

namespace fraclap {
namespace {

// Barycentric points and weights of the 7-point degree-5 rule.
constexpr double kW0 = 9.0 / 40.0;
constexpr double kA1 = 0.059715871789770;
constexpr double kB1 = 0.470142064105115;
constexpr double kW1 = 0.132394152788506;
constexpr double kA2 = 0.797426985353087;
constexpr double kB2 = 0.101286507323456;
constexpr double kW2 = 0.125939180544827;

constexpr std::array<std::array<double, 4>, 7> kTriRule = {{
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, kW0},
    {kA1, kB1, kB1, kW1},
    {kB1, kA1, kB1, kW1},
    {kB1, kB1, kA1, kW1},
    {kA2, kB2, kB2, kW2},
    {kB2, kA2, kB2, kW2},
    {kB2, kB2, kA2, kW2},
}};

constexpr std::array<std::array<double, 2>, 2> kGauss4Half = {{
    {0.3399810435848563, 0.6521451548625461},
    {0.8611363115940526, 0.3478548451374538},
}};

constexpr std::array<std::array<double, 2>, 4> kGauss8Half = {{
    {0.1834346424956498, 0.3626837833783620},
    {0.5255324099163290, 0.3137066458778873},
    {0.7966664774136267, 0.2223810344533745},
    {0.9602898564975363, 0.1012285362903763},
}};

}  // namespace

std::array<TriangleQuadPoint, 7> triangle_rule(const Eigen::Vector2d& a,
                                               const Eigen::Vector2d& b,
                                               const Eigen::Vector2d& c) {
  const double area =
      0.5 * std::abs((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
  std::array<TriangleQuadPoint, 7> out;
  for (int q = 0; q < 7; ++q) {
    const auto& r = kTriRule[q];
    out[q].x = r[0] * a + r[1] * b + r[2] * c;
    out[q].w = r[3] * area;
  }
  return out;
}

std::array<GaussPoint, 4> gauss4(double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::array<GaussPoint, 4> out;
  int i = 0;
  for (const auto& [x, w] : kGauss4Half) {
    out[i++] = {mid - half * x, w * half};
    out[i++] = {mid + half * x, w * half};
  }
  return out;
}

std::array<GaussPoint, 8> gauss8(double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::array<GaussPoint, 8> out;
  int i = 0;
  for (const auto& [x, w] : kGauss8Half) {
    out[i++] = {mid - half * x, w * half};
    out[i++] = {mid + half * x, w * half};
  }
  return out;
}

double integrate_1d(const Fn1d& f, double a, double b, int panels) {
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    for (const auto& gp : gauss8(a + p * h, a + (p + 1) * h)) sum += gp.w * f(gp.x);
  }
  return sum;
}

double integrate_unit_square(const Fn2d& f, int panels) {
  double sum = 0.0;
  const double h = 1.0 / panels;
  for (int px = 0; px < panels; ++px) {
    const auto gx = gauss8(px * h, (px + 1) * h);
    for (int py = 0; py < panels; ++py) {
      const auto gy = gauss8(py * h, (py + 1) * h);
      for (const auto& qx : gx)
        for (const auto& qy : gy) sum += qx.w * qy.w * f(qx.x, qy.x);
    }
  }
  return sum;
}

}  // namespace fraclap
