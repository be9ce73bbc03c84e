#include "kronsum/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kronsum {

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::epanechnikov: return "epanechnikov";
    case KernelKind::triweight: return "triweight";
    case KernelKind::truncated_gaussian: return "truncated_gaussian";
  }
  return "epanechnikov";
}

KernelKind kernel_kind_from_string(const std::string& s) {
  if (s == "epanechnikov") return KernelKind::epanechnikov;
  if (s == "triweight") return KernelKind::triweight;
  if (s == "truncated_gaussian") return KernelKind::truncated_gaussian;
  throw std::invalid_argument("unknown kernel kind: " + s);
}

double kernel_eval(const Kernel& kernel, double u) {
  if (std::abs(u) > 1.0) return 0.0;
  switch (kernel.kind) {
    case KernelKind::epanechnikov:
      return 0.75 * (1.0 - u * u);
    case KernelKind::triweight:
      return (35.0 / 32.0) * std::pow(1.0 - u * u, 3);
    case KernelKind::truncated_gaussian: {
      // standard normal restricted to [-1,1], renormalized:
      // integral of phi over [-1,1] is erf(1/sqrt(2))
      static const double z = std::erf(1.0 / std::sqrt(2.0)) * std::sqrt(2.0 * M_PI);
      return std::exp(-0.5 * u * u) / z;
    }
  }
  return 0.0;
}

WeightVector make_weights_with(const std::function<double(double)>& k, double h, double t0,
                               int m) {
  if (m < 1) throw std::invalid_argument("make_weights: m must be positive");
  if (!(h > 0.0)) throw std::invalid_argument("make_weights: bandwidth must be positive");
  if (t0 < 0.0 || t0 > 1.0) throw std::invalid_argument("make_weights: t0 must lie in [0,1]");

  WeightVector out;
  out.t0 = t0;
  out.m = m;
  out.h = h;
  out.weights.resize(m);
  for (int i = 1; i <= m; ++i)
    out.weights[i - 1] = k((double(i) / m - t0) / h) / (m * h);
  double total = stable_sum(out.weights);
  if (!(total > 0.0))
    throw std::invalid_argument("make_weights: all weights are zero (h too small relative to 1/m)");
  out.weights /= total;
  return out;
}

WeightVector make_weights(const Kernel& kernel, double t0, int m) {
  return make_weights_with([&kernel](double u) { return kernel_eval(kernel, u); }, kernel.h, t0,
                           m);
}

SmoothedCovariance smoothed_covariance(const DataMatrix& data, const WeightVector& weights,
                                       double trace_a) {
  if (trace_a < 0.0) throw std::invalid_argument("smoothed_covariance: trace_a must be >= 0");
  if (weights.m != data.m())
    throw std::invalid_argument("smoothed_covariance: weight length " +
                                std::to_string(weights.m) + " does not match m = " +
                                std::to_string(data.m()));
  const int n = data.n();
  const int m = data.m();

  // restrict to the kernel's support window
  int lo = 0, hi = m - 1;
  while (lo < m && weights.weights[lo] == 0.0) ++lo;
  while (hi >= 0 && weights.weights[hi] == 0.0) --hi;

  Matrix s = Matrix::Zero(n, n);
  if (lo <= hi) {
    Matrix xw = data.values.middleCols(lo, hi - lo + 1);
    Vector w = weights.weights.segment(lo, hi - lo + 1).cwiseSqrt();
    xw *= w.asDiagonal();
    s.selfadjointView<Eigen::Lower>().rankUpdate(xw);
    s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  }
  s.diagonal().array() -= trace_a / m;

  SmoothedCovariance out;
  out.t0 = weights.t0;
  out.matrix = std::move(s);
  out.weights = weights;
  out.trace_a_used = trace_a;
  return out;
}

SmoothedCovariance smoothed_covariance(const DataMatrix& data, double t0, const Kernel& kernel,
                                       double trace_a) {
  return smoothed_covariance(data, make_weights(kernel, t0, data.m()), trace_a);
}

double bandwidth_rule(int m, double c) {
  if (m < 2) throw std::invalid_argument("bandwidth_rule: m must be at least 2");
  if (!(c > 0.0)) throw std::invalid_argument("bandwidth_rule: c must be positive");
  double raw = c * std::cbrt(std::log(double(m)) / m);
  return std::clamp(raw, 1.0 / m, 1.0);
}

}  // namespace kronsum
