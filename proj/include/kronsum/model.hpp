#ifndef KRONSUM_MODEL_HPP
#define KRONSUM_MODEL_HPP

#include <string>
#include <vector>

#include "kronsum/core.hpp"

namespace kronsum {

// Additive spatiotemporal covariance model
//   Sigma = A (x) I_n  +  sum_i (e_i e_i^T) (x) B(i/m),
// with a temporally correlated m x m component A and a smoothly time-varying
// spatial trajectory B(t) sampled at the grid t = i/m, i = 1..m.

enum class TemporalTopology { ar1, star_block, ma, custom };

std::string to_string(TemporalTopology t);

struct TemporalCovariance {
  Matrix matrix;             // m x m, symmetric
  TemporalTopology label = TemporalTopology::custom;
  double cond_bound = 0.0;   // c_A: eigenvalues lie in [1/c_A, c_A]

  int m() const { return static_cast<int>(matrix.rows()); }

  // Checks symmetry, measures the spectrum and stores a tight conditioning
  // bound c_A = max(lambda_max, 1/lambda_min).
  static TemporalCovariance from_matrix(const Matrix& a,
                                        TemporalTopology label = TemporalTopology::custom);
};

struct SpatialTrajectory {
  int n = 0;
  int m = 0;
  std::vector<Matrix> matrices;       // B(i/m), i = 1..m
  std::vector<double> change_points;  // times where graph support changes
  double cond_bound = 0.0;            // c_B over the whole trajectory
  double smoothness_bound = 0.0;      // max elementwise second difference

  // Linear interpolation between grid values; clamped at the ends.
  Matrix at(double t) const;

  static SpatialTrajectory from_matrices(std::vector<Matrix> matrices,
                                         std::vector<double> change_points = {});
};

struct KroneckerSumModel {
  TemporalCovariance a;
  SpatialTrajectory b;
  double trace_a = 0.0;

  int n() const { return b.n; }
  int m() const { return b.m; }

  static KroneckerSumModel make(TemporalCovariance a, SpatialTrajectory b);
};

struct DataMatrix {
  Matrix values;  // n x m: rows = spatial variables, columns = time points

  int n() const { return static_cast<int>(values.rows()); }
  int m() const { return static_cast<int>(values.cols()); }

  static DataMatrix from_values(Matrix values);  // rejects NaN/Inf
};

// Materializes the full mn x mn covariance. Test oracle, never a production
// path; guarded by default at m*n <= 4096.
Matrix assemble_sigma(const KroneckerSumModel& model, int size_guard = 4096);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Report-only check of every model invariant (symmetry, spectral bounds,
// smoothness, dimension agreement, trace consistency).
ValidationReport validate_model(const KroneckerSumModel& model);

}  // namespace kronsum

#endif  // KRONSUM_MODEL_HPP
