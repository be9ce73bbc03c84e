#include <doctest.h>

#include <Eigen/Cholesky>

#include "kronsum/graphgen.hpp"
#include "kronsum/model.hpp"
#include "oracles.hpp"

using namespace kronsum;

namespace {

// random PD spatial matrices around the identity
Matrix random_spd(int n, SplitMix64& rng, double spread = 0.3) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.uniform(-spread, spread);
  return Matrix::Identity(n, n) + symmetrized(g * g.transpose());
}

KroneckerSumModel random_model(int n, int m, SplitMix64& rng) {
  Matrix a = random_spd(m, rng, 0.4);
  std::vector<Matrix> bs;
  Matrix base = random_spd(n, rng);
  Matrix drift = 0.01 * random_spd(n, rng);
  for (int i = 1; i <= m; ++i) bs.push_back(base + (double(i) / m) * drift);
  return KroneckerSumModel::make(TemporalCovariance::from_matrix(a),
                                 SpatialTrajectory::from_matrices(bs));
}

}  // namespace

TEST_CASE("assemble_sigma matches the Eq-4 block structure on tiny cases") {
  // m=2, n=1
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  std::vector<Matrix> bs{Matrix::Constant(1, 1, 3.0), Matrix::Constant(1, 1, 4.0)};
  auto model = KroneckerSumModel::make(TemporalCovariance::from_matrix(a),
                                       SpatialTrajectory::from_matrices(bs));
  Matrix sigma = assemble_sigma(model);
  Matrix expected(2, 2);
  expected << 5, 1, 1, 6;
  CHECK(max_abs(sigma - expected) == 0.0);

  // m=1, n=2: a*I2 + I2
  Matrix a1 = Matrix::Constant(1, 1, 1.7);
  auto model1 = KroneckerSumModel::make(
      TemporalCovariance::from_matrix(a1),
      SpatialTrajectory::from_matrices({Matrix::Identity(2, 2)}));
  Matrix sigma1 = assemble_sigma(model1);
  CHECK(max_abs(sigma1 - 2.7 * Matrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("assemble_sigma agrees with the elementwise oracle on random models") {
  SplitMix64 rng(71);
  for (int rep = 0; rep < 10; ++rep) {
    auto model = random_model(2, 2, rng);
    CHECK(max_abs(assemble_sigma(model) - oracles::elementwise_sigma(model)) == 0.0);
    auto model2 = random_model(3, 4, rng);
    CHECK(max_abs(assemble_sigma(model2) - oracles::elementwise_sigma(model2)) == 0.0);
  }
}

TEST_CASE("assemble_sigma guards and errors") {
  SplitMix64 rng(7);
  auto model = random_model(4, 4, rng);
  CHECK_THROWS_AS(assemble_sigma(model, 8), std::invalid_argument);

  auto bad = model;
  bad.b.m = 3;
  bad.b.matrices.pop_back();
  CHECK_THROWS_AS(assemble_sigma(bad), std::invalid_argument);
}

TEST_CASE("assembled covariance is PD for 50 random valid models") {
  SplitMix64 rng(2024);
  for (int rep = 0; rep < 50; ++rep) {
    int n = 2 + int(rng.below(6));
    int m = 2 + int(rng.below(6));
    auto model = random_model(n, m, rng);
    Matrix sigma = assemble_sigma(model, 256);
    Eigen::LLT<Matrix> llt(sigma);
    CHECK(llt.info() == Eigen::Success);
  }
}

TEST_CASE("scaling B scales each diagonal block's B-contribution linearly") {
  SplitMix64 rng(99);
  auto model = random_model(3, 3, rng);
  const double alpha = 2.5;
  auto scaled = model;
  for (Matrix& b : scaled.b.matrices) b *= alpha;
  Matrix s1 = assemble_sigma(model);
  Matrix s2 = assemble_sigma(scaled);
  const int n = model.n();
  for (int t = 0; t < model.m(); ++t) {
    Matrix c1 = s1.block(t * n, t * n, n, n) - model.a.matrix(t, t) * Matrix::Identity(n, n);
    Matrix c2 = s2.block(t * n, t * n, n, n) - model.a.matrix(t, t) * Matrix::Identity(n, n);
    // off-diagonal entries are untouched by the a_tt I term, so exact there
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j)
          CHECK(c2(i, j) == doctest::Approx(alpha * c1(i, j)).epsilon(1e-14));
        else
          CHECK(c2(i, j) == alpha * c1(i, j));
      }
  }
}

TEST_CASE("validate_model: clean model produces an empty report") {
  TrajectorySpec spec;
  spec.n = 12;
  spec.m = 20;
  spec.initial_edges = 8;
  spec.churn = 2;
  spec.num_change_points = 4;
  spec.seed = 3;
  auto traj = gen_er_trajectory(spec);
  auto model = KroneckerSumModel::make(gen_ar1(20, 0.5), traj.trajectory);
  auto report = validate_model(model);
  for (const auto& v : report.violations) INFO(v);
  CHECK(report.ok());
}

TEST_CASE("validate_model flags constructed violations") {
  SplitMix64 rng(5);
  auto model = random_model(3, 4, rng);

  SUBCASE("negative eigenvalue in a B matrix is reported with its index") {
    auto bad = model;
    bad.b.matrices[1] = Matrix::Identity(3, 3);
    bad.b.matrices[1](0, 0) = -0.5;
    bad.b.smoothness_bound = 1e12;  // isolate the PD violation
    auto report = validate_model(bad);
    CHECK(!report.ok());
    bool found = false;
    for (const auto& v : report.violations)
      if (v.find("B(2/m)") != std::string::npos &&
          v.find("not positive definite") != std::string::npos)
        found = true;
    CHECK(found);
  }

  SUBCASE("trace mismatch beyond 1e-10 relative is reported") {
    auto bad = model;
    bad.trace_a *= 1.0 + 1e-6;
    auto report = validate_model(bad);
    CHECK(!report.ok());
    bool found = false;
    for (const auto& v : report.violations)
      if (v.find("trace_a") != std::string::npos) found = true;
    CHECK(found);
  }
}

TEST_CASE("DataMatrix rejects non-finite entries") {
  Matrix x = Matrix::Zero(2, 2);
  CHECK_NOTHROW(DataMatrix::from_values(x));
  x(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DataMatrix::from_values(x), std::invalid_argument);
  x(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(DataMatrix::from_values(x), std::invalid_argument);
}

TEST_CASE("SpatialTrajectory::at interpolates linearly between grid points") {
  std::vector<Matrix> bs;
  for (int i = 1; i <= 4; ++i) bs.push_back(double(i) * Matrix::Identity(2, 2));
  auto traj = SpatialTrajectory::from_matrices(bs);
  CHECK(max_abs(traj.at(0.25) - 1.0 * Matrix::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(traj.at(1.0) - 4.0 * Matrix::Identity(2, 2)) < 1e-15);
  // midpoint of grid points 2/4 and 3/4
  CHECK(max_abs(traj.at(0.625) - 2.5 * Matrix::Identity(2, 2)) < 1e-15);
  // below the first grid point: clamped
  CHECK(max_abs(traj.at(0.1) - 1.0 * Matrix::Identity(2, 2)) < 1e-15);
}
