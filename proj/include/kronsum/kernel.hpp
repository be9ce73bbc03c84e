#ifndef KRONSUM_KERNEL_HPP
#define KRONSUM_KERNEL_HPP

#include <functional>
#include <string>

#include "kronsum/model.hpp"

namespace kronsum {

// Symmetric nonnegative kernels with compact support [-1,1] and unit mass.
enum class KernelKind { epanechnikov, triweight, truncated_gaussian };

std::string to_string(KernelKind k);
KernelKind kernel_kind_from_string(const std::string& s);

struct Kernel {
  KernelKind kind = KernelKind::epanechnikov;
  double h = 0.0;  // bandwidth in (0,1]
};

// K(u) for the chosen kind; exactly 0 outside [-1,1].
double kernel_eval(const Kernel& kernel, double u);

struct WeightVector {
  double t0 = 0.0;
  int m = 0;
  double h = 0.0;
  Vector weights;  // length m, nonnegative, sums to 1
};

// Raw weights (1/mh) K((i/m - t0)/h) over the grid i = 1..m, renormalized to
// sum exactly to 1 (boundary correction).
WeightVector make_weights(const Kernel& kernel, double t0, int m);

// Same, with an arbitrary kernel evaluator (test doubles, boxcar limits).
WeightVector make_weights_with(const std::function<double(double)>& k, double h, double t0, int m);

struct SmoothedCovariance {
  double t0 = 0.0;
  Matrix matrix;  // n x n, symmetric
  WeightVector weights;
  double trace_a_used = 0.0;
};

// S_hat_m(t0) = sum_i w_i(t0) x_i x_i^T - (trace_a/m) I
SmoothedCovariance smoothed_covariance(const DataMatrix& data, double t0, const Kernel& kernel,
                                       double trace_a);
SmoothedCovariance smoothed_covariance(const DataMatrix& data, const WeightVector& weights,
                                       double trace_a);

// h = clamp(c (log m / m)^{1/3}, 1/m, 1)
double bandwidth_rule(int m, double c);

}  // namespace kronsum

#endif  // KRONSUM_KERNEL_HPP
