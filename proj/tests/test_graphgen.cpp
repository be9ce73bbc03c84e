#include <doctest.h>

#include <Eigen/Cholesky>

#include <algorithm>
#include <map>
#include <set>

#include "kronsum/graphgen.hpp"
#include "oracles.hpp"

using namespace kronsum;

namespace {

// Straight-line replay of the documented generator protocol for tiny specs:
// same RNG, same draw order, independent bookkeeping. Produces Theta(t).
struct Replay {
  int n;
  std::map<Edge, std::vector<std::pair<double, double>>> knots;

  Matrix theta_at(double t) const {
    Matrix theta = 0.25 * Matrix::Identity(n, n);
    for (const auto& [e, ks] : knots) {
      double w;
      if (t <= ks.front().first) {
        w = ks.front().second;
      } else if (t >= ks.back().first) {
        w = ks.back().second;
      } else {
        w = 0.0;
        for (std::size_t k = 1; k < ks.size(); ++k)
          if (t <= ks[k].first) {
            double f = (t - ks[k - 1].first) / (ks[k].first - ks[k - 1].first);
            w = (1 - f) * ks[k - 1].second + f * ks[k].second;
            break;
          }
      }
      if (w > 0.0) {
        theta(e.first, e.first) += w;
        theta(e.second, e.second) += w;
        theta(e.first, e.second) -= w;
        theta(e.second, e.first) -= w;
      }
    }
    return theta;
  }
};

Replay replay_protocol(const TrajectorySpec& spec, std::vector<Edge> available) {
  SplitMix64 rng(spec.seed);
  Replay rep;
  rep.n = spec.n;
  struct St {
    double w;
    int added_at;
  };
  std::map<Edge, St> stable;

  auto take = [&](std::size_t idx) {
    Edge e = available[idx];
    available[idx] = available.back();
    available.pop_back();
    return e;
  };
  auto push = [&](const Edge& e, double t, double w) {
    auto& ks = rep.knots[e];
    if (!ks.empty() && ks.back().first == t)
      ks.back().second = w;
    else
      ks.emplace_back(t, w);
  };

  for (int k = 0; k < spec.initial_edges; ++k) {
    Edge e = take(rng.below(available.size()));
    double w = rng.uniform(spec.weight_lo, spec.weight_hi);
    stable[e] = {w, -2};
    push(e, 0.0, w);
  }
  for (int i = 0; i < spec.num_change_points; ++i) {
    double t_now = double(i) / spec.num_change_points;
    double t_next = double(i + 1) / spec.num_change_points;
    std::vector<Edge> eligible;
    for (const auto& [e, st] : stable)
      if (st.added_at <= i - 2) eligible.push_back(e);
    std::vector<Edge> deleted;
    for (int d = 0; d < spec.churn; ++d) {
      std::size_t idx = rng.below(eligible.size());
      deleted.push_back(eligible[idx]);
      eligible[idx] = eligible.back();
      eligible.pop_back();
    }
    for (const Edge& e : deleted) {
      push(e, t_now, stable[e].w);
      push(e, t_next, 0.0);
    }
    std::vector<std::pair<Edge, double>> added;
    for (int a = 0; a < spec.churn; ++a) {
      Edge e = take(rng.below(available.size()));
      double w = rng.uniform(spec.weight_lo, spec.weight_hi);
      added.emplace_back(e, w);
      push(e, t_now, 0.0);
      push(e, t_next, w);
    }
    for (const Edge& e : deleted) {
      stable.erase(e);
      available.push_back(e);
    }
    for (const auto& [e, w] : added) stable[e] = {w, i};
  }
  return rep;
}

std::vector<Edge> all_pairs(int n) {
  std::vector<Edge> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

}  // namespace

TEST_CASE("ER trajectory reproduces the 105/100 edge counts at scale") {
  TrajectorySpec spec;
  spec.n = 100;
  spec.m = 200;
  spec.initial_edges = 100;
  spec.churn = 5;
  spec.num_change_points = 5;
  spec.seed = 42;
  auto traj = gen_er_trajectory(spec);

  // change points sit on the grid at j = 40, 80, ..., 200
  for (int j = 1; j <= 200; ++j) {
    std::size_t edges = traj.graphs[j - 1].support.size();
    if (j % 40 == 0)
      CHECK(edges == 100);
    else
      CHECK(edges == 105);
  }
}

TEST_CASE("churn = 0 gives a constant trajectory") {
  TrajectorySpec spec;
  spec.n = 10;
  spec.m = 12;
  spec.initial_edges = 6;
  spec.churn = 0;
  spec.num_change_points = 3;
  spec.seed = 9;
  auto traj = gen_er_trajectory(spec);
  for (int i = 1; i < spec.m; ++i)
    CHECK(max_abs(traj.trajectory.matrices[i] - traj.trajectory.matrices[0]) == 0.0);
}

TEST_CASE("tiny ER trajectory matches a hand trace of the update protocol") {
  TrajectorySpec spec;
  spec.n = 4;
  spec.m = 8;
  spec.initial_edges = 2;
  spec.churn = 1;
  spec.num_change_points = 2;
  spec.seed = 1234;
  auto traj = gen_er_trajectory(spec);
  Replay rep = replay_protocol(spec, all_pairs(4));

  for (int j = 1; j <= spec.m; ++j) {
    double t = double(j) / spec.m;
    CHECK(max_abs(traj.theta_at(t) - rep.theta_at(t)) == 0.0);
    CHECK(max_abs(traj.graphs[j - 1].theta - rep.theta_at(t)) == 0.0);
    // B(i/m) really is Theta^{-1}
    Matrix prod = traj.trajectory.matrices[j - 1] * traj.graphs[j - 1].theta;
    CHECK(max_abs(prod - Matrix::Identity(4, 4)) < 1e-12);
  }
}

TEST_CASE("tiny grid trajectory matches the hand trace with grid candidates") {
  TrajectorySpec spec;
  spec.n = 9;
  spec.m = 6;
  spec.initial_edges = 3;
  spec.churn = 1;
  spec.num_change_points = 2;
  spec.topology = SpatialTopology::grid;
  spec.seed = 77;
  auto traj = gen_grid_trajectory(spec);

  std::vector<Edge> cand;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      int v = r * 3 + c;
      if (c + 1 < 3) cand.emplace_back(v, v + 1);
      if (r + 1 < 3) cand.emplace_back(v, v + 3);
    }
  std::sort(cand.begin(), cand.end());
  Replay rep = replay_protocol(spec, cand);
  for (int j = 1; j <= spec.m; ++j) {
    double t = double(j) / spec.m;
    CHECK(max_abs(traj.theta_at(t) - rep.theta_at(t)) == 0.0);
  }
}

TEST_CASE("grid trajectory restricts support to 4-neighbor adjacency") {
  TrajectorySpec spec;
  spec.n = 100;
  spec.m = 20;
  spec.initial_edges = 50;
  spec.churn = 5;
  spec.num_change_points = 5;
  spec.topology = SpatialTopology::grid;
  spec.seed = 11;
  auto traj = gen_grid_trajectory(spec);

  auto adjacent = [](Edge e) {
    int ri = e.first / 10, ci = e.first % 10;
    int rj = e.second / 10, cj = e.second % 10;
    return std::abs(ri - rj) + std::abs(ci - cj) == 1;
  };
  for (const auto& g : traj.graphs)
    for (const Edge& e : g.support) CHECK(adjacent(e));
}

TEST_CASE("2x2 grid support is contained in the enumerated adjacency") {
  TrajectorySpec spec;
  spec.n = 4;
  spec.m = 4;
  spec.initial_edges = 4;
  spec.churn = 0;
  spec.num_change_points = 1;
  spec.topology = SpatialTopology::grid;
  spec.seed = 5;
  auto traj = gen_grid_trajectory(spec);
  std::set<Edge> allowed{{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  for (const auto& g : traj.graphs)
    for (const Edge& e : g.support) CHECK(allowed.count(e) == 1);
}

TEST_CASE("edge churn at consecutive change points") {
  TrajectorySpec spec;
  spec.n = 40;
  spec.m = 20;
  spec.initial_edges = 30;
  spec.churn = 4;
  spec.num_change_points = 5;
  spec.seed = 31;
  auto traj = gen_er_trajectory(spec);

  for (int i = 0; i < spec.num_change_points; ++i) {
    auto s0 = traj.support_at(double(i) / spec.num_change_points);
    auto s1 = traj.support_at(double(i + 1) / spec.num_change_points);
    std::set<Edge> set0(s0.begin(), s0.end()), set1(s1.begin(), s1.end());
    int removed = 0, added = 0;
    for (const Edge& e : set0)
      if (!set1.count(e)) ++removed;
    for (const Edge& e : set1)
      if (!set0.count(e)) ++added;
    CHECK(removed == spec.churn);
    CHECK(added == spec.churn);
  }
}

TEST_CASE("trajectory smoothness: consecutive Theta differences are interpolation-bounded") {
  TrajectorySpec spec;
  spec.n = 100;
  spec.m = 200;
  spec.initial_edges = 100;
  spec.churn = 5;
  spec.num_change_points = 5;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    spec.seed = seed;
    auto traj = gen_er_trajectory(spec);
    double bound = 2.0 * spec.weight_hi * spec.num_change_points / spec.m;
    double worst = 0.0;
    for (int j = 1; j < spec.m; ++j)
      worst = std::max(worst, max_abs(traj.graphs[j].theta - traj.graphs[j - 1].theta));
    CHECK(worst <= bound + 1e-12);
  }
}

TEST_CASE("generated precision matrices pass Cholesky across seeds and sizes") {
  for (int n : {16, 100}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      TrajectorySpec spec;
      spec.n = n;
      spec.m = 10;
      spec.initial_edges = n == 16 ? 20 : 100;
      spec.churn = 3;
      spec.num_change_points = 4;
      spec.seed = seed;
      auto traj = gen_er_trajectory(spec);
      for (const auto& g : traj.graphs) {
        Eigen::LLT<Matrix> llt(g.theta);
        CHECK(llt.info() == Eigen::Success);
      }
    }
  }
}

TEST_CASE("identical specs give bitwise-identical trajectories") {
  TrajectorySpec spec;
  spec.n = 20;
  spec.m = 15;
  spec.initial_edges = 12;
  spec.churn = 2;
  spec.num_change_points = 3;
  spec.seed = 555;
  auto t1 = gen_er_trajectory(spec);
  auto t2 = gen_er_trajectory(spec);
  for (int j = 0; j < spec.m; ++j) {
    CHECK((t1.trajectory.matrices[j].array() == t2.trajectory.matrices[j].array()).all());
    CHECK(t1.graphs[j].support == t2.graphs[j].support);
  }
}

TEST_CASE("trajectory spec errors") {
  TrajectorySpec spec;
  spec.n = 4;
  spec.m = 4;
  spec.initial_edges = 7;  // > C(4,2) = 6
  CHECK_THROWS_AS(gen_er_trajectory(spec), std::invalid_argument);

  spec.initial_edges = 2;
  spec.topology = SpatialTopology::grid;
  spec.n = 5;  // not a perfect square
  CHECK_THROWS_AS(gen_grid_trajectory(spec), std::invalid_argument);

  spec.n = 4;
  spec.initial_edges = 5;  // grid has only 4 candidate edges
  CHECK_THROWS_AS(gen_grid_trajectory(spec), std::invalid_argument);
}

TEST_CASE("gen_ar1") {
  CHECK(max_abs(gen_ar1(5, 0.0).matrix - Matrix::Identity(5, 5)) == 0.0);
  auto a = gen_ar1(6, 0.5);
  CHECK(a.matrix(0, 2) == doctest::Approx(0.25));
  CHECK(a.matrix(5, 3) == doctest::Approx(0.25));

  auto big = gen_ar1(200, 0.95);
  Eigen::LLT<Matrix> llt(big.matrix);
  CHECK(llt.info() == Eigen::Success);

  CHECK_THROWS_AS(gen_ar1(5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gen_ar1(5, -1.2), std::invalid_argument);
}

TEST_CASE("gen_star_block") {
  // block_size = 1: no edges possible, A diagonal
  auto d = gen_star_block(6, 1, 0.1, 0.3, 1);
  CHECK(max_abs(d.matrix - 4.0 * Matrix::Identity(6, 6)) < 1e-12);

  // one block of 4: inverse support is the star {(0,1),(0,2),(0,3)}
  auto s = gen_star_block(4, 4, 0.1, 0.3, 2);
  Matrix theta = s.matrix.inverse();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (i == 0)
        CHECK(std::abs(theta(i, j)) > 1e-6);
      else
        CHECK(std::abs(theta(i, j)) < 1e-10);
    }

  // 20 blocks of 20: exactly 380 off-diagonal edge pairs in the inverse
  auto big = gen_star_block(400, 20, 0.1, 0.3, 3);
  Matrix big_theta = big.matrix.inverse();
  int edges = 0;
  for (int i = 0; i < 400; ++i)
    for (int j = i + 1; j < 400; ++j)
      if (std::abs(big_theta(i, j)) > 1e-8) ++edges;
  CHECK(edges == 380);

  CHECK_THROWS_AS(gen_star_block(10, 3, 0.1, 0.3, 1), std::invalid_argument);
}

TEST_CASE("gen_ma") {
  CHECK(max_abs(gen_ma(5, 0).matrix - Matrix::Identity(5, 5)) == 0.0);

  auto a = gen_ma(40, 15);
  CHECK(a.matrix(0, 16) == 0.0);  // outside the band
  CHECK(a.matrix(0, 15) == doctest::Approx(1.0 - 15.0 / 16.0));

  auto m50 = gen_ma(50, 15);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m50.matrix, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= 0.0);

  CHECK_THROWS_AS(gen_ma(10, 10), std::invalid_argument);
}
