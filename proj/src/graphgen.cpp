#include "kronsum/graphgen.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace kronsum {

namespace {

constexpr double kThetaDiag = 0.25;  // Theta(0) = 0.25 I

// Laplacian-style edge update: subtract the weight off-diagonal, add it on
// the diagonal. Keeps Theta >= 0.25 I.
void apply_edge(Matrix& theta, int i, int j, double w) {
  theta(i, i) += w;
  theta(j, j) += w;
  theta(i, j) -= w;
  theta(j, i) -= w;
}

struct ActiveEdge {
  double weight = 0.0;  // weight at the current anchor
  int added_at = -2;    // anchor index of the insertion decision; -2 = initial
};

std::vector<Edge> er_candidates(int n) {
  std::vector<Edge> out;
  out.reserve(n * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

std::vector<Edge> grid_candidates(int n) {
  int side = static_cast<int>(std::lround(std::sqrt(double(n))));
  if (side * side != n)
    throw std::invalid_argument("gen_grid_trajectory: n = " + std::to_string(n) +
                                " is not a perfect square");
  std::vector<Edge> out;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      int v = r * side + c;
      if (c + 1 < side) out.emplace_back(v, v + 1);
      if (r + 1 < side) out.emplace_back(v, v + side);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_spec(const TrajectorySpec& spec, std::size_t num_candidates) {
  if (spec.n < 2) throw std::invalid_argument("TrajectorySpec: n must be at least 2");
  if (spec.m < 1) throw std::invalid_argument("TrajectorySpec: m must be positive");
  if (spec.num_change_points < 1)
    throw std::invalid_argument("TrajectorySpec: num_change_points must be positive");
  if (spec.initial_edges < 0 || spec.churn < 0)
    throw std::invalid_argument("TrajectorySpec: negative edge counts");
  if (!(spec.weight_lo > 0.0) || spec.weight_lo > spec.weight_hi)
    throw std::invalid_argument("TrajectorySpec: need 0 < weight_lo <= weight_hi");
  if (static_cast<std::size_t>(spec.initial_edges) > num_candidates)
    throw std::invalid_argument("TrajectorySpec: more edges requested than available (" +
                                std::to_string(spec.initial_edges) + " > " +
                                std::to_string(num_candidates) + ")");
  if (static_cast<std::size_t>(spec.initial_edges + spec.churn) > num_candidates)
    throw std::invalid_argument("TrajectorySpec: initial_edges + churn exceeds candidate count");
}

TrajectoryGraphs gen_trajectory(const TrajectorySpec& spec, std::vector<Edge> candidates) {
  check_spec(spec, candidates.size());
  SplitMix64 rng(spec.seed);

  // edge pool not currently active; sampled by index, freed slots pushed back
  std::vector<Edge> available = candidates;
  std::map<Edge, ActiveEdge> stable;

  auto take_available = [&](std::size_t idx) {
    Edge e = available[idx];
    available[idx] = available.back();
    available.pop_back();
    return e;
  };

  // per-edge knot histories
  std::map<Edge, std::vector<std::pair<double, double>>> knots;
  auto push_knot = [&](const Edge& e, double t, double w) {
    auto& ks = knots[e];
    if (!ks.empty() && ks.back().first == t) {
      ks.back().second = w;
    } else {
      ks.emplace_back(t, w);
    }
  };

  // initial configuration at t = 0
  for (int k = 0; k < spec.initial_edges; ++k) {
    Edge e = take_available(rng.below(available.size()));
    double w = rng.uniform(spec.weight_lo, spec.weight_hi);
    stable[e] = {w, -2};
    push_knot(e, 0.0, w);
  }

  const int ncp = spec.num_change_points;
  for (int i = 0; i < ncp; ++i) {
    double t_now = double(i) / ncp;
    double t_next = double(i + 1) / ncp;

    // deletions: only edges stable since before the previous change point
    std::vector<Edge> eligible;
    for (const auto& [e, ae] : stable)
      if (ae.added_at <= i - 2) eligible.push_back(e);
    if (static_cast<int>(eligible.size()) < spec.churn)
      throw std::invalid_argument("gen_trajectory: not enough eligible edges to delete at t = " +
                                  std::to_string(t_now));
    std::vector<Edge> deleted;
    for (int d = 0; d < spec.churn; ++d) {
      std::size_t idx = rng.below(eligible.size());
      deleted.push_back(eligible[idx]);
      eligible[idx] = eligible.back();
      eligible.pop_back();
    }
    for (const Edge& e : deleted) {
      push_knot(e, t_now, stable[e].weight);
      push_knot(e, t_next, 0.0);
    }

    // additions: anything not currently active, fresh target weight
    std::vector<Edge> added;
    std::vector<double> targets;
    for (int a = 0; a < spec.churn; ++a) {
      if (available.empty())
        throw std::invalid_argument("gen_trajectory: no free edge slots to add at t = " +
                                    std::to_string(t_now));
      Edge e = take_available(rng.below(available.size()));
      double w = rng.uniform(spec.weight_lo, spec.weight_hi);
      // the Laplacian update rule keeps Theta PD for any positive weight, but
      // keep the guarded redraw path
      for (int attempt = 0; attempt < 100 && !(w > 0.0); ++attempt)
        w = rng.uniform(spec.weight_lo, spec.weight_hi);
      if (!(w > 0.0))
        throw std::runtime_error("gen_trajectory: could not draw a PD-preserving weight");
      added.push_back(e);
      targets.push_back(w);
      push_knot(e, t_now, 0.0);
      push_knot(e, t_next, w);
    }

    // advance state to the next anchor
    for (const Edge& e : deleted) {
      stable.erase(e);
      available.push_back(e);
    }
    for (std::size_t a = 0; a < added.size(); ++a) stable[added[a]] = {targets[a], i};
  }

  TrajectoryGraphs out;
  out.n = spec.n;
  out.m = spec.m;
  for (const auto& [e, ks] : knots) {
    ScheduledEdge se;
    se.i = e.first;
    se.j = e.second;
    se.knots = ks;
    out.schedule.push_back(std::move(se));
  }

  std::vector<double> change_points;
  for (int i = 0; i <= ncp; ++i) change_points.push_back(double(i) / ncp);

  std::vector<Matrix> bs;
  bs.reserve(spec.m);
  for (int g = 1; g <= spec.m; ++g) {
    double t = double(g) / spec.m;
    Matrix theta = out.theta_at(t);
    Eigen::LLT<Matrix> llt(theta);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("gen_trajectory: Theta(" + std::to_string(g) +
                               "/m) failed Cholesky");
    PrecisionGraph pg;
    pg.n = spec.n;
    pg.theta = theta;
    pg.support = out.support_at(t);
    out.graphs.push_back(std::move(pg));
    bs.push_back(llt.solve(Matrix::Identity(spec.n, spec.n)));
  }
  for (Matrix& b : bs) b = symmetrized(b);
  out.trajectory = SpatialTrajectory::from_matrices(std::move(bs), change_points);
  return out;
}

}  // namespace

double ScheduledEdge::weight_at(double t) const {
  if (knots.empty()) return 0.0;
  if (t <= knots.front().first) return knots.front().second;
  if (t >= knots.back().first) return knots.back().second;
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (t <= knots[k].first) {
      double t0 = knots[k - 1].first, t1 = knots[k].first;
      double w0 = knots[k - 1].second, w1 = knots[k].second;
      if (t1 == t0) return w1;
      double f = (t - t0) / (t1 - t0);
      return (1.0 - f) * w0 + f * w1;
    }
  }
  return knots.back().second;
}

Matrix TrajectoryGraphs::theta_at(double t) const {
  Matrix theta = kThetaDiag * Matrix::Identity(n, n);
  for (const ScheduledEdge& e : schedule) {
    double w = e.weight_at(t);
    if (w > 0.0) apply_edge(theta, e.i, e.j, w);
  }
  return theta;
}

std::vector<Edge> TrajectoryGraphs::support_at(double t) const {
  std::vector<Edge> out;
  for (const ScheduledEdge& e : schedule)
    if (e.weight_at(t) > 0.0) out.emplace_back(e.i, e.j);
  std::sort(out.begin(), out.end());
  return out;
}

TrajectoryGraphs gen_er_trajectory(const TrajectorySpec& spec) {
  if (spec.topology != SpatialTopology::er)
    throw std::invalid_argument("gen_er_trajectory: spec.topology must be er");
  return gen_trajectory(spec, er_candidates(spec.n));
}

TrajectoryGraphs gen_grid_trajectory(const TrajectorySpec& spec) {
  if (spec.topology != SpatialTopology::grid)
    throw std::invalid_argument("gen_grid_trajectory: spec.topology must be grid");
  return gen_trajectory(spec, grid_candidates(spec.n));
}

TemporalCovariance gen_ar1(int m, double rho) {
  if (m < 1) throw std::invalid_argument("gen_ar1: m must be positive");
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("gen_ar1: |rho| must be < 1");
  Matrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = std::pow(rho, std::abs(i - j));
  TemporalCovariance out;
  out.matrix = std::move(a);
  out.label = TemporalTopology::ar1;
  // AR(1) spectral density range: eigenvalues in ((1-|rho|)/(1+|rho|), (1+|rho|)/(1-|rho|))
  out.cond_bound = (1.0 + std::abs(rho)) / (1.0 - std::abs(rho));
  return out;
}

TemporalCovariance gen_star_block(int m, int block_size, double weight_lo, double weight_hi,
                                  std::uint64_t seed) {
  if (m < 1 || block_size < 1)
    throw std::invalid_argument("gen_star_block: m and block_size must be positive");
  if (m % block_size != 0)
    throw std::invalid_argument("gen_star_block: block_size " + std::to_string(block_size) +
                                " does not divide m = " + std::to_string(m));
  if (!(weight_lo > 0.0) || weight_lo > weight_hi)
    throw std::invalid_argument("gen_star_block: need 0 < weight_lo <= weight_hi");

  SplitMix64 rng(seed);
  Matrix theta = kThetaDiag * Matrix::Identity(m, m);
  for (int b = 0; b < m / block_size; ++b) {
    int hub = b * block_size;
    for (int k = 1; k < block_size; ++k)
      apply_edge(theta, hub, hub + k, rng.uniform(weight_lo, weight_hi));
  }
  Eigen::LLT<Matrix> llt(theta);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("gen_star_block: precision matrix failed Cholesky");
  TemporalCovariance out;
  out.matrix = symmetrized(llt.solve(Matrix::Identity(m, m)));
  out.label = TemporalTopology::star_block;
  // Gershgorin on Theta: lambda(Theta) in [0.25, 0.25 + 2(block_size-1) hi]
  double theta_max = kThetaDiag + 2.0 * (block_size - 1) * weight_hi;
  out.cond_bound = std::max(1.0 / kThetaDiag, theta_max) * (1.0 + 1e-9);
  return out;
}

TemporalCovariance gen_ma(int m, int bandwidth) {
  if (m < 1) throw std::invalid_argument("gen_ma: m must be positive");
  if (bandwidth < 0 || bandwidth >= m)
    throw std::invalid_argument("gen_ma: bandwidth must be in [0, m)");
  Matrix a = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      int d = std::abs(i - j);
      if (d <= bandwidth) a(i, j) = 1.0 - double(d) / (bandwidth + 1);
    }
  TemporalCovariance out;
  out.matrix = std::move(a);
  out.label = TemporalTopology::ma;
  // Bartlett autocovariance is PSD; finite sections are PD but can be
  // ill-conditioned, so measure the spectrum directly.
  Eigen::SelfAdjointEigenSolver<Matrix> es(out.matrix, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0)
    throw std::runtime_error("gen_ma: finite section lost positive definiteness");
  out.cond_bound = std::max(hi, 1.0 / lo) * (1.0 + 1e-9);
  return out;
}

}  // namespace kronsum
