#ifndef KRONSUM_SAMPLER_HPP
#define KRONSUM_SAMPLER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kronsum/model.hpp"

namespace kronsum {

// Zero-mean, unit-variance innovation laws with bounded subgaussian norm.
enum class InnovationLaw { gaussian, rademacher, uniform_scaled };

std::string to_string(InnovationLaw law);
InnovationLaw innovation_law_from_string(const std::string& s);

// Symmetric PSD square root via eigendecomposition: S*S = input.
// Rejects inputs with min eigenvalue < -1e-10 * max eigenvalue.
Matrix sqrt_psd(const Matrix& input);

// Precomputed square roots for repeated draws from one model.
struct SamplerPlan {
  Matrix sqrt_a;               // m x m
  std::vector<Matrix> sqrt_b;  // B(i/m)^{1/2}, i = 1..m

  static SamplerPlan from_model(const KroneckerSumModel& model);
  // caller supplies A^{1/2} (e.g. cached across seeds)
  static SamplerPlan from_model(const KroneckerSumModel& model, Matrix sqrt_a);
};

// X = Z1 A^{1/2} + Z_B with Z_B column i = B(i/m)^{1/2} Z2 e_i; Z1 and Z2 are
// independent n x m draws from the law. Column-major fill of Z1 then Z2 from
// a single SplitMix64 stream, so output is bitwise-reproducible.
DataMatrix sample_data(const SamplerPlan& plan, InnovationLaw law, std::uint64_t seed);
DataMatrix sample_data(const KroneckerSumModel& model, InnovationLaw law, std::uint64_t seed);

}  // namespace kronsum

#endif  // KRONSUM_SAMPLER_HPP
