#include "kronsum/glasso.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace kronsum {

namespace {

double soft_threshold(double x, double lambda) {
  if (x > lambda) return x - lambda;
  if (x < -lambda) return x + lambda;
  return 0.0;
}

double log_det_pd(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("glasso: matrix not positive definite in log-determinant");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

// KKT residual of the stationarity condition s - w + lambda*G = 0.
double kkt_value(const Matrix& theta, const Matrix& w, const Matrix& s, double lambda,
                 bool penalize_diagonal) {
  const int p = static_cast<int>(s.rows());
  double worst = 0.0;
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) {
      if (i == j && !penalize_diagonal) continue;
      double r = s(i, j) - w(i, j);
      double v;
      if (theta(i, j) != 0.0)
        v = std::abs(r + lambda * (theta(i, j) > 0.0 ? 1.0 : -1.0));
      else
        v = std::max(0.0, std::abs(r) - lambda);
      worst = std::max(worst, v);
    }
  }
  return worst;
}

struct Prepared {
  Matrix s;            // possibly PD-floored copy
  double diag_shift = 0.0;
};

// Off-diagonal-penalty mode enters the dual box at W = s with the diagonal
// pinned; a singular PSD input makes the first subproblems ill-posed, so
// apply a minimal diagonal floor.
Prepared prepare_input(const GlassoProblem& problem) {
  Prepared out;
  out.s = symmetrized(problem.s);
  if (!problem.penalize_diagonal) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(out.s, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    if (lo <= 1e-10 * std::max(hi, 0.0)) {
      out.diag_shift = -std::min(lo, 0.0) + 1e-8 * std::max(hi, 1.0);
      out.s.diagonal().array() += out.diag_shift;
    }
  }
  return out;
}

}  // namespace

double glasso_objective(const Matrix& theta, const Matrix& s, double lambda,
                        bool penalize_diagonal) {
  double penalty = theta.cwiseAbs().sum();
  if (!penalize_diagonal) penalty -= theta.diagonal().cwiseAbs().sum();
  return (theta.cwiseProduct(s)).sum() - log_det_pd(theta) + lambda * penalty;
}

double kkt_check(const GlassoSolution& solution, const GlassoProblem& problem) {
  return kkt_value(solution.theta, solution.w, symmetrized(problem.s), problem.lambda,
                   problem.penalize_diagonal);
}

GlassoSolution glasso_solve(const GlassoProblem& problem) {
  return glasso_solve(problem, Matrix());
}

GlassoSolution glasso_solve(const GlassoProblem& problem, const Matrix& theta_init) {
  const int p = static_cast<int>(problem.s.rows());
  if (p == 0 || problem.s.cols() != p)
    throw std::invalid_argument("glasso_solve: s must be square and non-empty");
  if (!is_symmetric(problem.s, 1e-10 * std::max(1.0, max_abs(problem.s))))
    throw std::invalid_argument("glasso_solve: s must be symmetric");
  if (problem.lambda < 0.0) throw std::invalid_argument("glasso_solve: lambda must be >= 0");
  if (problem.max_iter < 1) throw std::invalid_argument("glasso_solve: max_iter must be >= 1");

  GlassoSolution sol;

  if (problem.lambda == 0.0) {
    // unpenalized MLE: theta = s^{-1}; requires PD input
    Matrix s = symmetrized(problem.s);
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("glasso_solve: lambda = 0 requires positive definite s");
    sol.theta = symmetrized(llt.solve(Matrix::Identity(p, p)));
    sol.w = s;
    sol.objective = glasso_objective(sol.theta, s, 0.0, problem.penalize_diagonal);
    sol.kkt_residual = 0.0;
    sol.iterations = 0;
    sol.converged = true;
    return sol;
  }

  Prepared prep = prepare_input(problem);
  const Matrix& s = prep.s;
  const double lambda = problem.lambda;

  Matrix w = s;
  if (problem.penalize_diagonal) w.diagonal().array() += lambda;

  Matrix beta = Matrix::Zero(p, p);  // column j: lasso coefficients for column j
  if (theta_init.rows() == p && theta_init.cols() == p) {
    for (int j = 0; j < p; ++j) {
      double d = theta_init(j, j);
      if (!(d > 0.0)) throw std::invalid_argument("glasso_solve: theta_init diagonal not positive");
      beta.col(j) = -theta_init.col(j) / d;
      beta(j, j) = 0.0;
    }
  }

  Matrix theta = Matrix::Zero(p, p);
  const int max_inner_passes = 10000;
  double inner_tol = 0.2 * problem.tol;

  auto rebuild_theta = [&]() -> bool {
    for (int j = 0; j < p; ++j) {
      double denom = w(j, j) - w.col(j).dot(beta.col(j));
      if (!(denom > 0.0)) return false;
      double tjj = 1.0 / denom;
      for (int k = 0; k < p; ++k)
        theta(k, j) = (k == j) ? tjj : (beta(k, j) == 0.0 ? 0.0 : -beta(k, j) * tjj);
    }
    // symmetrize; exact zeros survive when both directions agree
    for (int j = 0; j < p; ++j)
      for (int i = j + 1; i < p; ++i) {
        double v = (theta(i, j) == 0.0 && theta(j, i) == 0.0)
                       ? 0.0
                       : 0.5 * (theta(i, j) + theta(j, i));
        theta(i, j) = v;
        theta(j, i) = v;
      }
    return true;
  };

  Matrix w_exact;
  int sweep = 0;
  for (sweep = 1; sweep <= problem.max_iter; ++sweep) {
    for (int j = 0; j < p; ++j) {
      Vector b = beta.col(j);
      Vector q = w * b;  // q_k = (W beta)_k; beta_j = 0 so q == W11 beta off j
      for (int pass = 0; pass < max_inner_passes; ++pass) {
        double viol = 0.0;
        for (int k = 0; k < p; ++k) {
          if (k == j) continue;
          double c = s(k, j) - (q[k] - w(k, k) * b[k]);
          double bnew = soft_threshold(c, lambda) / w(k, k);
          if (bnew != b[k]) {
            double d = bnew - b[k];
            q += w.col(k) * d;
            b[k] = bnew;
          }
        }
        // verification pass over the subproblem KKT: grad_k = (W11 b - s12)_k
        for (int k = 0; k < p; ++k) {
          if (k == j) continue;
          double g = q[k] - s(k, j);
          double v = (b[k] != 0.0) ? std::abs(g + lambda * (b[k] > 0.0 ? 1.0 : -1.0))
                                   : std::max(0.0, std::abs(g) - lambda);
          viol = std::max(viol, v);
        }
        if (viol <= inner_tol) break;
      }
      beta.col(j) = b;
      for (int k = 0; k < p; ++k)
        if (k != j) {
          double v = q[k];  // (W11 beta)_k
          w(k, j) = v;
          w(j, k) = v;
        }
    }

    if (!rebuild_theta()) continue;

    double kkt_m = kkt_value(theta, w, s, lambda, problem.penalize_diagonal);
    if (kkt_m <= problem.tol) {
      Eigen::LLT<Matrix> llt(theta);
      if (llt.info() == Eigen::Success) {
        w_exact = symmetrized(llt.solve(Matrix::Identity(p, p)));
        double kkt_e = kkt_value(theta, w_exact, s, lambda, problem.penalize_diagonal);
        if (kkt_e <= problem.tol) {
          sol.kkt_residual = kkt_e;
          sol.converged = true;
          break;
        }
        // maintained dual agreed but the exact inverse does not: tighten
        inner_tol = std::max(inner_tol * 0.25, 1e-16);
      }
    }
  }

  if (!sol.converged) {
    sweep = problem.max_iter;
    if (!rebuild_theta())
      throw std::runtime_error("glasso_solve: failed to form a positive definite iterate");
    Eigen::LLT<Matrix> llt(theta);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("glasso_solve: final iterate not positive definite");
    w_exact = symmetrized(llt.solve(Matrix::Identity(p, p)));
    sol.kkt_residual = kkt_value(theta, w_exact, s, lambda, problem.penalize_diagonal);
  }

  sol.theta = theta;
  sol.w = w_exact;
  sol.objective = glasso_objective(theta, symmetrized(problem.s), lambda,
                                   problem.penalize_diagonal);
  sol.iterations = sweep;
  return sol;
}

double lambda_rule_b(int m, double c) {
  if (m < 2) throw std::invalid_argument("lambda_rule_b: m must be at least 2");
  return c * std::sqrt(std::log(double(m)) / std::pow(double(m), 2.0 / 3.0));
}

double lambda_rule_a(int m, int n, double c) {
  if (m < 2) throw std::invalid_argument("lambda_rule_a: m must be at least 2");
  if (n < 1) throw std::invalid_argument("lambda_rule_a: n must be at least 1");
  return c * std::sqrt(std::log(double(m)) / double(n));
}

}  // namespace kronsum
