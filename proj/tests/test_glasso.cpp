#include <doctest.h>

#include "kronsum/glasso.hpp"
#include "oracles.hpp"

using namespace kronsum;

namespace {

Matrix random_pd(int p, SplitMix64& rng, double spread = 0.5) {
  Matrix g(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) g(i, j) = rng.uniform(-spread, spread);
  return Matrix::Identity(p, p) + symmetrized(g * g.transpose());
}

}  // namespace

TEST_CASE("lambda = 0 returns the unpenalized MLE") {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 2.0;
  s(1, 1) = 4.0;
  GlassoProblem problem{s, 0.0, true, 1e-6, 500};
  GlassoSolution sol = glasso_solve(problem);
  CHECK(sol.converged);
  CHECK(sol.theta(0, 0) == doctest::Approx(0.5));
  CHECK(sol.theta(1, 1) == doctest::Approx(0.25));
  CHECK(sol.kkt_residual <= 1e-10);
  CHECK(kkt_check(sol, problem) <= 1e-10);

  Matrix singular = Matrix::Ones(2, 2);
  CHECK_THROWS_AS(glasso_solve(GlassoProblem{singular, 0.0, true, 1e-6, 500}),
                  std::invalid_argument);
}

TEST_CASE("off-diagonal penalty above the threshold kills the edge exactly") {
  Matrix s(2, 2);
  s << 1.0, 0.5, 0.5, 1.0;
  GlassoProblem problem{s, 0.6, false, 1e-8, 500};
  GlassoSolution sol = glasso_solve(problem);
  CHECK(sol.converged);
  CHECK(sol.theta(0, 1) == 0.0);
  CHECK(sol.theta(1, 0) == 0.0);
  CHECK(sol.theta(0, 0) == doctest::Approx(1.0).epsilon(1e-6));

  // dual oracle agrees on the optimum
  auto oracle = oracles::glasso_dual_oracle(s, 0.6, false);
  CHECK(std::abs(sol.objective - oracle.value) < 1e-6);
}

TEST_CASE("support threshold property in both penalty modes") {
  SplitMix64 rng(15);
  Matrix s = random_pd(5, rng);
  double thr = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) thr = std::max(thr, std::abs(s(i, j)));

  for (bool diag : {true, false}) {
    GlassoProblem problem{s, thr * 1.01, diag, 1e-7, 500};
    GlassoSolution sol = glasso_solve(problem);
    REQUIRE(sol.converged);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (i != j) CHECK(sol.theta(i, j) == 0.0);
    for (int i = 0; i < 5; ++i) {
      double expect = diag ? 1.0 / (s(i, i) + thr * 1.01) : 1.0 / s(i, i);
      CHECK(sol.theta(i, i) == doctest::Approx(expect).epsilon(1e-6));
    }
  }
}

TEST_CASE("objective matches the dual oracle within 1e-6 on random problems") {
  SplitMix64 rng(2718);
  for (int rep = 0; rep < 20; ++rep) {
    int p = 2 + int(rng.below(9));  // p <= 10
    Matrix s = random_pd(p, rng);
    bool diag = (rep % 2) == 0;
    double lambda = 0.02 + 0.3 * rng.uniform();
    GlassoProblem problem{s, lambda, diag, 1e-7, 2000};
    GlassoSolution sol = glasso_solve(problem);
    REQUIRE(sol.converged);
    CHECK(sol.kkt_residual <= 1e-6);

    auto oracle = oracles::glasso_dual_oracle(s, lambda, diag);
    // strong duality: primal optimum equals p + logdet(W*)
    CHECK(std::abs(sol.objective - oracle.value) < 1e-6);
    // weak duality certificate: any feasible dual point lower-bounds us
    CHECK(sol.objective >= oracle.value - 1e-6);
  }
}

TEST_CASE("two initializations reach the same objective") {
  SplitMix64 rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    int p = 2 + int(rng.below(9));
    Matrix s = random_pd(p, rng);
    GlassoProblem problem{s, 0.1, true, 1e-8, 2000};
    GlassoSolution a = glasso_solve(problem);
    Matrix init = Matrix::Identity(p, p) * 0.5;
    GlassoSolution b = glasso_solve(problem, init);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(std::abs(a.objective - b.objective) < 1e-6);
  }
}

TEST_CASE("kkt_check flags a perturbed solution") {
  SplitMix64 rng(77);
  Matrix s = random_pd(4, rng);
  GlassoProblem problem{s, 0.1, true, 1e-7, 500};
  GlassoSolution sol = glasso_solve(problem);
  REQUIRE(sol.converged);
  CHECK(kkt_check(sol, problem) <= 1e-7);

  GlassoSolution bad = sol;
  bad.theta(0, 0) += 0.05;
  bad.w = bad.theta.inverse();
  CHECK(kkt_check(bad, problem) > 1e-7);
}

TEST_CASE("solution invariants: PD theta, symmetric, w theta = I") {
  SplitMix64 rng(41);
  Matrix s = random_pd(6, rng);
  GlassoProblem problem{s, 0.15, true, 1e-7, 500};
  GlassoSolution sol = glasso_solve(problem);
  REQUIRE(sol.converged);
  CHECK(max_abs(sol.theta - sol.theta.transpose()) == 0.0);
  Eigen::LLT<Matrix> llt(sol.theta);
  CHECK(llt.info() == Eigen::Success);
  CHECK(max_abs(sol.w * sol.theta - Matrix::Identity(6, 6)) < 1e-8);
}

TEST_CASE("lambda rules") {
  CHECK(lambda_rule_b(1000, 1.0) == doctest::Approx(0.26283).epsilon(1e-3));
  CHECK(lambda_rule_b(1000, 0.0) == 0.0);
  for (int m = 3; m < 200; ++m) CHECK(lambda_rule_b(m + 1, 1.0) < lambda_rule_b(m, 1.0));

  CHECK(lambda_rule_a(8, 4, 1.0) == doctest::Approx(0.721).epsilon(1e-2));
  CHECK(lambda_rule_a(8, 4, 0.0) == 0.0);
  CHECK(lambda_rule_a(100, 50, 1.0) / lambda_rule_a(100, 100, 1.0) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(lambda_rule_b(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(lambda_rule_a(10, 0, 1.0), std::invalid_argument);
}
