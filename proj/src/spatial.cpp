#include "kronsum/spatial.hpp"

#include <sstream>
#include <stdexcept>

namespace kronsum {

BEstimate estimate_b(const DataMatrix& data, double t0, const Kernel& kernel, double trace_a,
                     double lambda, const SolverOptions& options) {
  SmoothedCovariance s = smoothed_covariance(data, t0, kernel, trace_a);

  BEstimate out;
  out.t0 = t0;
  out.lambda = lambda;
  out.h = kernel.h;

  double min_diag = s.matrix.diagonal().minCoeff();
  if (min_diag < 0.0) {
    std::ostringstream os;
    os << "estimate_b: smoothed covariance has negative diagonal (min " << min_diag
       << ") after trace subtraction; trace_a = " << trace_a << " is too large";
    throw std::runtime_error(os.str());
  }

  GlassoProblem problem;
  problem.s = s.matrix;
  problem.lambda = lambda;
  problem.penalize_diagonal = true;
  problem.tol = options.tol;
  problem.max_iter = options.max_iter;
  GlassoSolution sol = glasso_solve(problem);
  if (!sol.converged)
    out.warnings.push_back("glasso did not reach tolerance " + std::to_string(options.tol) +
                           " within " + std::to_string(options.max_iter) + " sweeps");

  out.theta_hat = sol.theta;
  out.b_hat = sol.w;
  out.kkt_residual = sol.kkt_residual;
  out.iterations = sol.iterations;
  out.converged = sol.converged;
  return out;
}

std::vector<BEstimate> estimate_b_path(const DataMatrix& data, const std::vector<double>& t0_grid,
                                       const Kernel& kernel, double trace_a, double lambda,
                                       const SolverOptions& options) {
  std::vector<BEstimate> out;
  out.reserve(t0_grid.size());
  std::ostringstream failures;
  int failure_count = 0;
  for (std::size_t i = 0; i < t0_grid.size(); ++i) {
    try {
      out.push_back(estimate_b(data, t0_grid[i], kernel, trace_a, lambda, options));
    } catch (const std::exception& e) {
      if (failure_count++) failures << "; ";
      failures << "[" << i << "] t0 = " << t0_grid[i] << ": " << e.what();
    }
  }
  if (failure_count)
    throw std::runtime_error("estimate_b_path: " + std::to_string(failure_count) +
                             " point(s) failed: " + failures.str());
  return out;
}

}  // namespace kronsum
