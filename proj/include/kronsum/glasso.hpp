#ifndef KRONSUM_GLASSO_HPP
#define KRONSUM_GLASSO_HPP

#include <optional>

#include "kronsum/core.hpp"

namespace kronsum {

// L1-penalized inverse covariance estimation:
//   minimize over Theta > 0:  tr(Theta s) - log|Theta| + lambda * |Theta|_1
// with the penalty over all entries (penalize_diagonal) or off-diagonal only.

struct GlassoProblem {
  Matrix s;                       // p x p symmetric input
  double lambda = 0.0;            // >= 0
  bool penalize_diagonal = true;  // Eq-7-style full L1 vs off-diagonal L1
  double tol = 1e-6;              // KKT residual tolerance
  int max_iter = 500;             // outer sweeps
};

struct GlassoSolution {
  Matrix theta;  // precision estimate, PD, exact zeros where the penalty fires
  Matrix w;      // covariance dual estimate, w = theta^{-1} at convergence
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Block coordinate descent over columns of the covariance dual with lasso
// subproblems; the returned w is the exact inverse of theta.
GlassoSolution glasso_solve(const GlassoProblem& problem);
GlassoSolution glasso_solve(const GlassoProblem& problem, const Matrix& theta_init);

// Max elementwise violation |s_ij - w_ij + lambda g_ij| of the stationarity
// condition, with g a valid subgradient of the penalty at theta (sign where
// theta_ij != 0, clamped residual at zeros). Diagonal entries participate
// only when penalize_diagonal.
double kkt_check(const GlassoSolution& solution, const GlassoProblem& problem);

double glasso_objective(const Matrix& theta, const Matrix& s, double lambda,
                        bool penalize_diagonal);

// Theorem-rate regularization defaults.
double lambda_rule_b(int m, double c);         // c sqrt(log m / m^{2/3})
double lambda_rule_a(int m, int n, double c);  // c sqrt(log m / n)

}  // namespace kronsum

#endif  // KRONSUM_GLASSO_HPP
