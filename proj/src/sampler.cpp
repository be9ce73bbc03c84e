#include "kronsum/sampler.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace kronsum {

std::string to_string(InnovationLaw law) {
  switch (law) {
    case InnovationLaw::gaussian: return "gaussian";
    case InnovationLaw::rademacher: return "rademacher";
    case InnovationLaw::uniform_scaled: return "uniform_scaled";
  }
  return "gaussian";
}

InnovationLaw innovation_law_from_string(const std::string& s) {
  if (s == "gaussian") return InnovationLaw::gaussian;
  if (s == "rademacher") return InnovationLaw::rademacher;
  if (s == "uniform_scaled") return InnovationLaw::uniform_scaled;
  throw std::invalid_argument("unknown innovation law: " + s);
}

Matrix sqrt_psd(const Matrix& input) {
  if (input.rows() != input.cols())
    throw std::invalid_argument("sqrt_psd: matrix must be square");
  if (!is_symmetric(input, 1e-10 * std::max(1.0, max_abs(input))))
    throw std::invalid_argument("sqrt_psd: matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(input);
  if (es.info() != Eigen::Success) throw std::runtime_error("sqrt_psd: eigendecomposition failed");
  Vector ev = es.eigenvalues();
  double lo = ev.minCoeff();
  double hi = ev.maxCoeff();
  if (lo < -1e-10 * std::max(hi, 0.0))
    throw std::invalid_argument("sqrt_psd: min eigenvalue " + std::to_string(lo) +
                                " is negative beyond tolerance");
  Vector root = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

const double kSqrt3 = std::sqrt(3.0);

double draw(SplitMix64& rng, InnovationLaw law) {
  switch (law) {
    case InnovationLaw::gaussian:
      return rng.normal();
    case InnovationLaw::rademacher:
      return (rng.next() & 1ULL) ? 1.0 : -1.0;
    case InnovationLaw::uniform_scaled:
      return (2.0 * rng.uniform() - 1.0) * kSqrt3;
  }
  return 0.0;
}

Matrix draw_matrix(SplitMix64& rng, InnovationLaw law, int n, int m) {
  Matrix z(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = draw(rng, law);
  return z;
}

}  // namespace

SamplerPlan SamplerPlan::from_model(const KroneckerSumModel& model) {
  return from_model(model, sqrt_psd(model.a.matrix));
}

SamplerPlan SamplerPlan::from_model(const KroneckerSumModel& model, Matrix sqrt_a) {
  if (sqrt_a.rows() != model.m() || sqrt_a.cols() != model.m())
    throw std::invalid_argument("SamplerPlan: sqrt_a has wrong dimensions");
  SamplerPlan plan;
  plan.sqrt_a = std::move(sqrt_a);
  plan.sqrt_b.reserve(model.m());
  for (const Matrix& b : model.b.matrices) plan.sqrt_b.push_back(sqrt_psd(b));
  return plan;
}

DataMatrix sample_data(const SamplerPlan& plan, InnovationLaw law, std::uint64_t seed) {
  const int m = static_cast<int>(plan.sqrt_a.rows());
  const int n = static_cast<int>(plan.sqrt_b.front().rows());
  SplitMix64 rng(seed);
  Matrix z1 = draw_matrix(rng, law, n, m);
  Matrix z2 = draw_matrix(rng, law, n, m);
  Matrix x = z1 * plan.sqrt_a;
  for (int i = 0; i < m; ++i) x.col(i) += plan.sqrt_b[i] * z2.col(i);
  return DataMatrix::from_values(std::move(x));
}

DataMatrix sample_data(const KroneckerSumModel& model, InnovationLaw law, std::uint64_t seed) {
  return sample_data(SamplerPlan::from_model(model), law, seed);
}

}  // namespace kronsum
