#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fraclap/fem2d.hpp"
#include "fraclap/spectral.hpp"

namespace fraclap {

/// Spectral-norm of a nodal error: sqrt(e' M e + sum_k lambda_k^s c_k^2)
/// with c = V' M e the coefficients in the discrete eigenbasis.
double hs_error_via_eigen(const Eigen::VectorXd& e, const EigenBasis& basis, double s);

/// L2 distance between a P1 nodal function and a closed-form reference,
/// element-wise degree-5 quadrature.
double l2_error(const TriMesh& mesh, const Eigen::VectorXd& u, const Fn2d& exact);

/// Least-squares slope of log(err) against log(n). Scale-invariant in both
/// arguments; requires at least two samples with positive entries.
double fit_rate(const std::vector<double>& n, const std::vector<double>& err);

struct ConvergenceRecord {
  std::string kind;
  double s = 0.0;
  int M = 0;
  std::size_t num_prisms = 0;
  double hs_error = 0.0;
  double l2_error = 0.0;
  double energy_error = 0.0;
  double seconds = 0.0;
};

/// CSV with the fixed header
/// kind,s,M,num_prisms,hs_error,l2_error,energy_error,seconds
/// and deterministic formatting (shortest round-trip doubles).
void write_csv(std::ostream& os, const std::vector<ConvergenceRecord>& records);

}  // namespace fraclap
