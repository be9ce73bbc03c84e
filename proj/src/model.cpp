#include "kronsum/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace kronsum {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kTraceRelTol = 1e-10;

double cond_bound_of(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0) return 0.0;  // not PD; caller reports
  return std::max(hi, 1.0 / lo) * (1.0 + 1e-9);
}

}  // namespace

std::string to_string(TemporalTopology t) {
  switch (t) {
    case TemporalTopology::ar1: return "ar1";
    case TemporalTopology::star_block: return "star_block";
    case TemporalTopology::ma: return "ma";
    case TemporalTopology::custom: return "custom";
  }
  return "custom";
}

TemporalCovariance TemporalCovariance::from_matrix(const Matrix& a, TemporalTopology label) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw std::invalid_argument("TemporalCovariance: matrix must be square and non-empty");
  if (!is_symmetric(a, kSymmetryTol))
    throw std::invalid_argument("TemporalCovariance: matrix not symmetric within 1e-12");
  TemporalCovariance out;
  out.matrix = symmetrized(a);
  out.label = label;
  out.cond_bound = cond_bound_of(out.matrix);
  if (out.cond_bound == 0.0)
    throw std::invalid_argument("TemporalCovariance: matrix is not positive definite");
  return out;
}

Matrix SpatialTrajectory::at(double t) const {
  // grid convention: sample i lives at t = i/m, i = 1..m
  if (m == 1 || t <= 1.0 / m) return matrices.front();
  if (t >= 1.0) return matrices.back();
  double pos = t * m;  // in (1, m)
  int lo = static_cast<int>(std::floor(pos));
  if (lo >= m) return matrices.back();
  double frac = pos - lo;
  return (1.0 - frac) * matrices[lo - 1] + frac * matrices[lo];
}

SpatialTrajectory SpatialTrajectory::from_matrices(std::vector<Matrix> mats,
                                                   std::vector<double> change_points) {
  if (mats.empty()) throw std::invalid_argument("SpatialTrajectory: no matrices");
  SpatialTrajectory out;
  out.n = static_cast<int>(mats.front().rows());
  out.m = static_cast<int>(mats.size());
  for (int i = 0; i < out.m; ++i) {
    if (mats[i].rows() != out.n || mats[i].cols() != out.n)
      throw std::invalid_argument("SpatialTrajectory: inconsistent dimensions at index " +
                                  std::to_string(i + 1));
    if (!is_symmetric(mats[i], kSymmetryTol))
      throw std::invalid_argument("SpatialTrajectory: matrix " + std::to_string(i + 1) +
                                  " not symmetric");
    mats[i] = symmetrized(mats[i]);
  }
  out.matrices = std::move(mats);
  out.change_points = std::move(change_points);

  double bound = 0.0;
  for (const Matrix& b : out.matrices) {
    double c = cond_bound_of(b);
    if (c == 0.0) throw std::invalid_argument("SpatialTrajectory: non-PD matrix in trajectory");
    bound = std::max(bound, c);
  }
  out.cond_bound = bound;

  double smooth = 0.0;
  for (int i = 1; i + 1 < out.m; ++i) {
    Matrix d2 = out.matrices[i + 1] - 2.0 * out.matrices[i] + out.matrices[i - 1];
    smooth = std::max(smooth, max_abs(d2));
  }
  out.smoothness_bound = smooth * (1.0 + 1e-9);
  return out;
}

KroneckerSumModel KroneckerSumModel::make(TemporalCovariance a, SpatialTrajectory b) {
  if (a.m() != b.m)
    throw std::invalid_argument("KroneckerSumModel: a.m != b.m (" + std::to_string(a.m()) +
                                " vs " + std::to_string(b.m) + ")");
  KroneckerSumModel out;
  out.trace_a = a.matrix.trace();
  out.a = std::move(a);
  out.b = std::move(b);
  return out;
}

DataMatrix DataMatrix::from_values(Matrix values) {
  if (values.rows() == 0 || values.cols() == 0)
    throw std::invalid_argument("DataMatrix: empty matrix");
  if (!values.allFinite())
    throw std::invalid_argument("DataMatrix: entries must be finite (no NaN/Inf)");
  DataMatrix out;
  out.values = std::move(values);
  return out;
}

Matrix assemble_sigma(const KroneckerSumModel& model, int size_guard) {
  const int m = model.a.m();
  const int n = model.b.n;
  if (m != model.b.m)
    throw std::invalid_argument("assemble_sigma: dimension mismatch between A and B trajectory");
  if (static_cast<long>(m) * n > size_guard)
    throw std::invalid_argument("assemble_sigma: m*n = " + std::to_string(long(m) * n) +
                                " exceeds size guard " + std::to_string(size_guard));

  Matrix sigma = Matrix::Zero(m * n, m * n);
  for (int s = 0; s < m; ++s) {
    for (int t = 0; t < m; ++t) {
      double a_st = model.a.matrix(s, t);
      if (s == t) {
        sigma.block(s * n, t * n, n, n) =
            a_st * Matrix::Identity(n, n) + model.b.matrices[s];
      } else {
        sigma.block(s * n, t * n, n, n).diagonal().setConstant(a_st);
      }
    }
  }
  return sigma;
}

ValidationReport validate_model(const KroneckerSumModel& model) {
  ValidationReport report;
  auto add = [&report](const std::string& msg) { report.violations.push_back(msg); };

  const Matrix& a = model.a.matrix;
  if (a.rows() != a.cols() || a.rows() == 0) {
    add("temporal matrix is not square");
    return report;
  }
  double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol) {
    std::ostringstream os;
    os << "temporal matrix asymmetry " << asym << " exceeds 1e-12";
    add(os.str());
  }
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(a), Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    double c = model.a.cond_bound;
    if (c <= 0.0) {
      add("temporal conditioning bound c_A not set");
    } else if (lo < 1.0 / c - 1e-12 || hi > c + 1e-12) {
      std::ostringstream os;
      os << "temporal eigenvalues [" << lo << ", " << hi << "] outside [1/c_A, c_A] with c_A = "
         << c;
      add(os.str());
    }
  }

  if (model.a.m() != model.b.m) add("a.m != b.m");

  for (int i = 0; i < model.b.m; ++i) {
    const Matrix& b = model.b.matrices[i];
    if (b.rows() != model.b.n || b.cols() != model.b.n) {
      add("B(" + std::to_string(i + 1) + "/m) has wrong dimensions");
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(b), Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    double c = model.b.cond_bound;
    if (lo <= 0.0) {
      std::ostringstream os;
      os << "B(" << (i + 1) << "/m) not positive definite: min eigenvalue " << lo;
      add(os.str());
    } else if (c > 0.0 && (lo < 1.0 / c - 1e-12 || hi > c + 1e-12)) {
      std::ostringstream os;
      os << "B(" << (i + 1) << "/m) eigenvalues [" << lo << ", " << hi
         << "] outside [1/c_B, c_B] with c_B = " << c;
      add(os.str());
    }
  }

  for (int i = 1; i + 1 < model.b.m; ++i) {
    Matrix d2 = model.b.matrices[i + 1] - 2.0 * model.b.matrices[i] + model.b.matrices[i - 1];
    double v = max_abs(d2);
    if (v > model.b.smoothness_bound + 1e-15) {
      std::ostringstream os;
      os << "second difference " << v << " at index " << (i + 1)
         << " exceeds smoothness bound " << model.b.smoothness_bound;
      add(os.str());
    }
  }

  double tr = a.trace();
  double scale = std::max(std::abs(tr), std::abs(model.trace_a));
  if (scale > 0.0 && std::abs(tr - model.trace_a) > kTraceRelTol * scale) {
    std::ostringstream os;
    os << "trace_a = " << model.trace_a << " inconsistent with trace(A) = " << tr;
    add(os.str());
  }
  return report;
}

}  // namespace kronsum
