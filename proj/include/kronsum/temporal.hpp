#ifndef KRONSUM_TEMPORAL_HPP
#define KRONSUM_TEMPORAL_HPP

#include <string>
#include <vector>

#include "kronsum/glasso.hpp"
#include "kronsum/kernel.hpp"

namespace kronsum {

// (1/m) sum_i ||x_i||^2 - (n/m) trace_a, the constant-trace estimator.
double estimate_trace_b(const DataMatrix& data, double trace_a);

// Kernel-weighted variant: sum_i w_i(t0) ||x_i||^2 - (n/m) trace_a.
double estimate_trace_b_t(const DataMatrix& data, double t0, const Kernel& kernel,
                          double trace_a);
double estimate_trace_b_t(const DataMatrix& data, const WeightVector& weights, double trace_a);

// A_tilde = (1/n) X^T X - (1/n) diag(trhat_B(1/m), ..., trhat_B(1)).
// The diagonal correction uses the time-varying trace estimator by default;
// constant_trace switches to the flat-weight version.
Matrix form_a_tilde(const DataMatrix& data, double trace_a, const Kernel& kernel,
                    bool constant_trace = false);

struct PsdProjection {
  Matrix a_plus;
  double gap = 0.0;  // achieved ||a_plus - a_tilde||_max
  int iterations = 0;
  bool converged = false;
};

// Nearest PSD matrix in max-norm, min_{A >= 0} ||a_tilde - A||_max, by ADMM
// splitting the PSD cone (eigenvalue clip) against the max-norm prox
// (L1-ball projection). tol <= 0 selects 1e-7 * ||a_tilde||_max.
PsdProjection psd_project_maxnorm(const Matrix& a_tilde, double tol = -1.0, int max_iter = 20000);

// diag(A)^{-1/2} A diag(A)^{-1/2}; requires a strictly positive diagonal.
Matrix correlation_scale(const Matrix& a);

struct AEstimate {
  Matrix a_tilde;  // raw sample estimate, possibly indefinite
  Matrix a_plus;   // PSD projection
  Matrix rho_hat;  // correlation-scale precision solution
  Matrix a_hat;    // (trace_a/m) * rho_hat covariance
  double lambda_n = 0.0;
  double projection_gap = 0.0;
  double kkt_residual = 0.0;
  int glasso_iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

struct AEstimateOptions {
  bool constant_trace_b = false;
  double glasso_tol = 1e-6;
  int glasso_max_iter = 500;
  double admm_tol = -1.0;  // <= 0: 1e-7 * ||a_tilde||_max
  int admm_max_iter = 20000;
};

// Full pipeline: form_a_tilde -> psd_project_maxnorm -> correlation_scale ->
// off-diagonal GLasso -> rescale by trace_a/m.
AEstimate estimate_a(const DataMatrix& data, double trace_a, const Kernel& kernel,
                     double lambda_n, const AEstimateOptions& options = {});

// Heuristic: m * max(0, mean diag((1/n) X^T X) - lambda_min((1/n) X^T X)).
// Sensitive to topology; callers should surface it as a heuristic.
double tune_trace_a(const DataMatrix& data);

}  // namespace kronsum

#endif  // KRONSUM_TEMPORAL_HPP
