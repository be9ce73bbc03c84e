#include "kronsum/temporal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace kronsum {

double estimate_trace_b(const DataMatrix& data, double trace_a) {
  if (trace_a < 0.0) throw std::invalid_argument("estimate_trace_b: trace_a must be >= 0");
  const int m = data.m();
  double s = data.values.squaredNorm() / m;
  return s - double(data.n()) / m * trace_a;
}

double estimate_trace_b_t(const DataMatrix& data, const WeightVector& weights, double trace_a) {
  if (trace_a < 0.0) throw std::invalid_argument("estimate_trace_b_t: trace_a must be >= 0");
  if (weights.m != data.m())
    throw std::invalid_argument("estimate_trace_b_t: weight length does not match m");
  double s = 0.0;
  for (int i = 0; i < data.m(); ++i)
    if (weights.weights[i] != 0.0) s += weights.weights[i] * data.values.col(i).squaredNorm();
  return s - double(data.n()) / data.m() * trace_a;
}

double estimate_trace_b_t(const DataMatrix& data, double t0, const Kernel& kernel,
                          double trace_a) {
  return estimate_trace_b_t(data, make_weights(kernel, t0, data.m()), trace_a);
}

Matrix form_a_tilde(const DataMatrix& data, double trace_a, const Kernel& kernel,
                    bool constant_trace) {
  const int n = data.n();
  const int m = data.m();
  Matrix a = Matrix::Zero(m, m);
  a.selfadjointView<Eigen::Lower>().rankUpdate(data.values.transpose(), 1.0 / n);
  a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
  if (constant_trace) {
    double tr = estimate_trace_b(data, trace_a);
    a.diagonal().array() -= tr / n;
  } else {
    for (int i = 0; i < m; ++i)
      a(i, i) -= estimate_trace_b_t(data, double(i + 1) / m, kernel, trace_a) / n;
  }
  return a;
}

namespace {

// Euclidean projection onto the L1 ball of radius r (Duchi et al. pivot form,
// implemented by sorting).
void project_l1_ball(Eigen::Map<Vector> v, double r) {
  double norm1 = v.cwiseAbs().sum();
  if (norm1 <= r) return;
  std::vector<double> mag(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) mag[i] = std::abs(v[i]);
  std::sort(mag.begin(), mag.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    cum += mag[k];
    double cand = (cum - r) / double(k + 1);
    if (k + 1 == mag.size() || mag[k + 1] <= cand) {
      theta = cand;
      break;
    }
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double a = std::abs(v[i]) - theta;
    v[i] = a > 0.0 ? (v[i] > 0.0 ? a : -a) : 0.0;
  }
}

Matrix clip_to_psd(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_project_maxnorm: eigendecomposition failed");
  Vector ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

PsdProjection psd_project_maxnorm(const Matrix& a_tilde, double tol, int max_iter) {
  const int m = static_cast<int>(a_tilde.rows());
  if (m == 0 || a_tilde.cols() != m)
    throw std::invalid_argument("psd_project_maxnorm: matrix must be square");
  if (!is_symmetric(a_tilde, 1e-10 * std::max(1.0, max_abs(a_tilde))))
    throw std::invalid_argument("psd_project_maxnorm: matrix must be symmetric");

  double scale = max_abs(a_tilde);
  if (tol <= 0.0) tol = 1e-7 * std::max(scale, 1e-300);

  PsdProjection out;

  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a_tilde, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() >= 0.0) {
      out.a_plus = a_tilde;
      out.gap = 0.0;
      out.converged = true;
      return out;
    }
  }

  // minimize I_PSD(A) + ||D||_max  s.t.  A + D = a_tilde, penalty rho = 1,
  // no over-relaxation
  const double rho = 1.0;
  Matrix a = Matrix::Zero(m, m);
  Matrix d = Matrix::Zero(m, m);
  Matrix u = Matrix::Zero(m, m);

  int iter = 0;
  for (iter = 1; iter <= max_iter; ++iter) {
    a = clip_to_psd(a_tilde - d - u);

    Matrix d_prev = d;
    Matrix v = a_tilde - a - u;
    // prox of (1/rho)||.||_max via Moreau: v - P_{L1 ball, radius 1/rho}(v)
    Matrix proj = v;
    project_l1_ball(Eigen::Map<Vector>(proj.data(), proj.size()), 1.0 / rho);
    d = v - proj;

    u += a + d - a_tilde;

    double primal = max_abs(a + d - a_tilde);
    double dual = rho * max_abs(d - d_prev);
    if (primal < tol && dual < tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged)
    throw std::runtime_error("psd_project_maxnorm: ADMM did not converge within " +
                             std::to_string(max_iter) + " iterations");

  out.a_plus = symmetrized(a);
  out.gap = max_abs(out.a_plus - a_tilde);
  out.iterations = iter;
  return out;
}

Matrix correlation_scale(const Matrix& a) {
  const int m = static_cast<int>(a.rows());
  if (m == 0 || a.cols() != m)
    throw std::invalid_argument("correlation_scale: matrix must be square");
  for (int i = 0; i < m; ++i)
    if (!(a(i, i) > 0.0))
      throw std::invalid_argument("correlation_scale: nonpositive diagonal at index " +
                                  std::to_string(i + 1) + " (" + std::to_string(a(i, i)) + ")");
  Vector inv_root = a.diagonal().cwiseSqrt().cwiseInverse();
  Matrix out = inv_root.asDiagonal() * a * inv_root.asDiagonal();
  out.diagonal().setOnes();
  return symmetrized(out);
}

AEstimate estimate_a(const DataMatrix& data, double trace_a, const Kernel& kernel,
                     double lambda_n, const AEstimateOptions& options) {
  if (!(trace_a > 0.0)) throw std::invalid_argument("estimate_a: trace_a must be positive");
  const int m = data.m();
  AEstimate out;
  out.lambda_n = lambda_n;

  try {
    out.a_tilde = form_a_tilde(data, trace_a, kernel, options.constant_trace_b);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("estimate_a[form_a_tilde]: ") + e.what());
  }

  try {
    PsdProjection proj = psd_project_maxnorm(out.a_tilde, options.admm_tol,
                                             options.admm_max_iter);
    out.a_plus = proj.a_plus;
    out.projection_gap = proj.gap;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("estimate_a[psd_project_maxnorm]: ") + e.what());
  }

  Matrix rho_input;
  try {
    rho_input = correlation_scale(out.a_plus);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("estimate_a[correlation_scale]: ") + e.what());
  }

  GlassoSolution sol;
  try {
    GlassoProblem problem;
    problem.s = rho_input;
    problem.lambda = lambda_n;
    problem.penalize_diagonal = false;
    problem.tol = options.glasso_tol;
    problem.max_iter = options.glasso_max_iter;
    sol = glasso_solve(problem);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("estimate_a[glasso]: ") + e.what());
  }
  if (!sol.converged) out.warnings.push_back("glasso did not reach tolerance");

  out.rho_hat = sol.theta;
  out.a_hat = (trace_a / m) * sol.w;
  out.kkt_residual = sol.kkt_residual;
  out.glasso_iterations = sol.iterations;
  out.converged = sol.converged;

  double diag_spread = out.a_tilde.diagonal().maxCoeff() - out.a_tilde.diagonal().minCoeff();
  double diag_scale = std::max(1.0, max_abs(out.a_tilde.diagonal()));
  if (diag_spread > 0.5 * diag_scale)
    out.warnings.push_back("diag(a_tilde) spread " + std::to_string(diag_spread) +
                           " is large; data may violate the constant-diagonal normalization");
  return out;
}

double tune_trace_a(const DataMatrix& data) {
  const int n = data.n();
  const int m = data.m();
  Matrix g = Matrix::Zero(m, m);
  g.selfadjointView<Eigen::Lower>().rankUpdate(data.values.transpose(), 1.0 / n);
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  double floor = es.eigenvalues().minCoeff();
  double tau_a = g.diagonal().mean() - floor;
  return m * std::max(0.0, tau_a);
}

}  // namespace kronsum
