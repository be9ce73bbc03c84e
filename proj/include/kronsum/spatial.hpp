#ifndef KRONSUM_SPATIAL_HPP
#define KRONSUM_SPATIAL_HPP

#include <string>
#include <vector>

#include "kronsum/glasso.hpp"
#include "kronsum/kernel.hpp"

namespace kronsum {

struct SolverOptions {
  double tol = 1e-6;
  int max_iter = 500;
};

struct BEstimate {
  double t0 = 0.0;
  Matrix b_hat;      // covariance estimate
  Matrix theta_hat;  // precision estimate, b_hat^{-1}
  double lambda = 0.0;
  double h = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

// Kernel-smoothed covariance at t0 fed through the full-L1 GLasso.
BEstimate estimate_b(const DataMatrix& data, double t0, const Kernel& kernel, double trace_a,
                     double lambda, const SolverOptions& options = {});

// Independent estimates over a time grid, order preserved; per-point failures
// are aggregated with their indices.
std::vector<BEstimate> estimate_b_path(const DataMatrix& data, const std::vector<double>& t0_grid,
                                       const Kernel& kernel, double trace_a, double lambda,
                                       const SolverOptions& options = {});

}  // namespace kronsum

#endif  // KRONSUM_SPATIAL_HPP
