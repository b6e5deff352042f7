#include "fraclap/error_metrics.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fraclap {
namespace {

std::string shortest(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("write_csv: formatting failed");
  return std::string(buf, p);
}

}  // namespace

double hs_error_via_eigen(const Eigen::VectorXd& e, const EigenBasis& basis, double s) {
  if (basis.rep != EigenBasis::Rep::Fem)
    throw std::invalid_argument("hs_error_via_eigen: needs a discrete basis");
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("hs_error_via_eigen: s in [0,1]");
  const Eigen::VectorXd Me = basis.mass * e;
  const Eigen::VectorXd c = basis.vectors.transpose() * Me;
  double acc = e.dot(Me);
  for (int k = 0; k < basis.count(); ++k)
    acc += std::pow(basis.eigenvalues[k], s) * c[k] * c[k];
  return std::sqrt(acc);
}

double l2_error(const TriMesh& mesh, const Eigen::VectorXd& u, const Fn2d& exact) {
  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto rule =
        triangle_rule(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
    for (const auto& qp : rule) {
      const double diff = eval_p1(mesh, u, t, qp.x) - exact(qp.x.x(), qp.x.y());
      acc += qp.w * diff * diff;
    }
  }
  return std::sqrt(acc);
}

double fit_rate(const std::vector<double>& n, const std::vector<double>& err) {
  if (n.size() != err.size() || n.size() < 2)
    throw std::invalid_argument("fit_rate: need matching samples, at least two");
  const int m = static_cast<int>(n.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    if (!(n[i] > 0.0) || !(err[i] > 0.0))
      throw std::invalid_argument("fit_rate: samples must be positive");
    const double x = std::log(n[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) <= 1e-12 * (1.0 + m * sxx))
    throw std::invalid_argument("fit_rate: degenerate abscissae");
  return (m * sxy - sx * sy) / denom;
}

void write_csv(std::ostream& os, const std::vector<ConvergenceRecord>& records) {
  os << "kind,s,M,num_prisms,hs_error,l2_error,energy_error,seconds\n";
  for (const auto& r : records) {
    os << r.kind << ',' << shortest(r.s) << ',' << r.M << ',' << r.num_prisms << ','
       << shortest(r.hs_error) << ',' << shortest(r.l2_error) << ','
       << shortest(r.energy_error) << ',' << shortest(r.seconds) << '\n';
  }
}

}  // namespace fraclap
