#pragma once

#include <functional>
#include <stdexcept>
#include <utility>

#include <Eigen/Sparse>

namespace fraclap {

using SpMat = Eigen::SparseMatrix<double>;

/// Assembled symmetric bilinear form. Backed by Eigen compressed storage;
/// the full matrix is kept so mat-vecs stay one-liners.
class SparseSymmetricMatrix {
 public:
  SparseSymmetricMatrix() = default;
  explicit SparseSymmetricMatrix(SpMat m) : mat_(std::move(m)) {
    mat_.makeCompressed();
  }

  int dimension() const { return static_cast<int>(mat_.rows()); }
  const SpMat& matrix() const { return mat_; }

  double symmetry_defect() const {
    SpMat d = SpMat(mat_.transpose()) - mat_;
    double m = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
      for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
  }

 private:
  SpMat mat_;
};

struct PcgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Diagonally preconditioned CG for SPD systems. An optional projection is
/// applied to the iterates' residual-space vectors; it is used to keep the
/// singular Neumann system on the mean-zero subspace.
PcgResult pcg(const SpMat& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
              double rel_tol, int max_iter,
              const std::function<void(Eigen::VectorXd&)>& project = {});

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fraclap
