#ifndef KRONSUM_METRICS_HPP
#define KRONSUM_METRICS_HPP

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kronsum/core.hpp"

namespace kronsum {

struct ConfusionCounts {
  long tp = 0, tn = 0, fp = 0, fn = 0;
};

// {(i,j): i<j, |theta_ij| > threshold}; with the solver's exact-zero
// convention, threshold 0 is exact.
template <typename Derived>
std::vector<std::pair<int, int>> edge_support(const Eigen::MatrixBase<Derived>& theta,
                                              double threshold = 0.0) {
  if (theta.rows() != theta.cols())
    throw std::invalid_argument("edge_support: matrix must be square");
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(theta.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(theta(i, j)) > threshold) out.emplace_back(i, j);
  return out;
}

// Upper-triangle confusion counts of an estimated edge set against the truth
// over the n(n-1)/2 possible undirected edges. Both lists must be sorted.
inline ConfusionCounts confusion_counts(const std::vector<std::pair<int, int>>& estimate,
                                        const std::vector<std::pair<int, int>>& truth, int n) {
  ConfusionCounts c;
  auto e = estimate.begin();
  auto t = truth.begin();
  long both = 0;
  while (e != estimate.end() && t != truth.end()) {
    if (*e == *t) {
      ++both;
      ++e;
      ++t;
    } else if (*e < *t) {
      ++e;
    } else {
      ++t;
    }
  }
  c.tp = both;
  c.fp = static_cast<long>(estimate.size()) - both;
  c.fn = static_cast<long>(truth.size()) - both;
  c.tn = static_cast<long>(n) * (n - 1) / 2 - c.tp - c.fp - c.fn;
  return c;
}

// Matthews correlation coefficient; 0 when any denominator factor vanishes.
inline double mcc(const ConfusionCounts& c) {
  double tp = double(c.tp), tn = double(c.tn), fp = double(c.fp), fn = double(c.fn);
  double d = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (d <= 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(d);
}

template <typename D1, typename D2>
double rel_frobenius(const Eigen::MatrixBase<D1>& estimate, const Eigen::MatrixBase<D2>& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw std::invalid_argument("rel_frobenius: shape mismatch");
  double denom = truth.norm();
  if (denom == 0.0) throw std::invalid_argument("rel_frobenius: truth has zero norm");
  return (estimate - truth).norm() / denom;
}

template <typename D1, typename D2>
double rel_spectral(const Eigen::MatrixBase<D1>& estimate, const Eigen::MatrixBase<D2>& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw std::invalid_argument("rel_spectral: shape mismatch");
  auto op_norm = [](const Matrix& a) {
    if (a.rows() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues()[0];
  };
  double denom = op_norm(truth.derived());
  if (denom == 0.0) throw std::invalid_argument("rel_spectral: truth has zero norm");
  return op_norm(estimate.derived() - truth.derived()) / denom;
}

}  // namespace kronsum

#endif  // KRONSUM_METRICS_HPP
