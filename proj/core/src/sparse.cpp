#include "fraclap/sparse.hpp"

namespace fraclap {

PcgResult pcg(const SpMat& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
              double rel_tol, int max_iter,
              const std::function<void(Eigen::VectorXd&)>& project) {
  const Eigen::Index n = A.rows();
  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = A.coeff(i, i);
    inv_diag[i] = (d > 0.0) ? 1.0 / d : 1.0;
  }

  if (x.size() != n) x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = b - A * x;
  if (project) project(r);
  const double b_norm = b.norm();
  PcgResult res;
  if (b_norm == 0.0) {
    x.setZero();
    res.converged = true;
    return res;
  }

  Eigen::VectorXd z = inv_diag.asDiagonal() * r;
  if (project) project(z);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd Ap = A * p;
    const double alpha = rz / p.dot(Ap);
    x += alpha * p;
    r -= alpha * Ap;
    if (project) project(r);
    res.iterations = it + 1;
    res.relative_residual = r.norm() / b_norm;
    if (res.relative_residual < rel_tol) {
      res.converged = true;
      return res;
    }
    z = inv_diag.asDiagonal() * r;
    if (project) project(z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return res;
}

}  // namespace fraclap
