#pragma once

#include <array>
#include <functional>

#include <Eigen/Core>

namespace fraclap {

using Fn2d = std::function<double(double, double)>;
using Fn1d = std::function<double(double)>;

/// 7-point degree-5 rule on a triangle (weights sum to the triangle area).
struct TriangleQuadPoint {
  Eigen::Vector2d x;
  double w;
};
std::array<TriangleQuadPoint, 7> triangle_rule(const Eigen::Vector2d& a,
                                               const Eigen::Vector2d& b,
                                               const Eigen::Vector2d& c);

/// n-point Gauss-Legendre on [a,b]; n in {4, 8}.
struct GaussPoint {
  double x;
  double w;
};
std::array<GaussPoint, 4> gauss4(double a, double b);
std::array<GaussPoint, 8> gauss8(double a, double b);

/// Composite 8-point Gauss over [a,b] with `panels` equal panels.
double integrate_1d(const Fn1d& f, double a, double b, int panels);

/// Composite tensor 8x8 Gauss over [0,1]^2 with panels^2 equal cells.
double integrate_unit_square(const Fn2d& f, int panels);

}  // namespace fraclap
