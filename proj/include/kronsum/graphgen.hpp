#ifndef KRONSUM_GRAPHGEN_HPP
#define KRONSUM_GRAPHGEN_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "kronsum/model.hpp"

namespace kronsum {

using Edge = std::pair<int, int>;  // 0-based, first < second

struct PrecisionGraph {
  int n = 0;
  Matrix theta;
  std::vector<Edge> support;  // {(i,j): i<j, theta_ij != 0}
};

enum class SpatialTopology { er, grid };

struct TrajectorySpec {
  int n = 0;
  int m = 0;
  int initial_edges = 0;
  int churn = 0;
  int num_change_points = 1;
  double weight_lo = 0.1;
  double weight_hi = 0.3;
  SpatialTopology topology = SpatialTopology::er;
  std::uint64_t seed = 0;
};

// Piecewise-linear weight history of one undirected edge. Flat before the
// first and after the last knot.
struct ScheduledEdge {
  int i = 0, j = 0;
  std::vector<std::pair<double, double>> knots;  // (time, weight), time-sorted
  double weight_at(double t) const;
};

// Full output of the time-varying graph generators: the B(i/m) trajectory,
// per-grid-time precision graphs, and the exact edge schedule for truth
// queries at arbitrary t.
struct TrajectoryGraphs {
  int n = 0;
  int m = 0;
  SpatialTrajectory trajectory;
  std::vector<PrecisionGraph> graphs;
  std::vector<ScheduledEdge> schedule;

  Matrix theta_at(double t) const;
  std::vector<Edge> support_at(double t) const;  // edges with weight > 0
};

// Smoothly time-varying Erdos-Renyi precision trajectory: Theta(0) = 0.25 I
// plus k random edges; at each change point `churn` edges are deleted and
// `churn` added, weights interpolating linearly to the next change point.
TrajectoryGraphs gen_er_trajectory(const TrajectorySpec& spec);

// Same protocol with candidate edges restricted to 4-neighbor adjacency on a
// sqrt(n) x sqrt(n) grid.
TrajectoryGraphs gen_grid_trajectory(const TrajectorySpec& spec);

// A_ij = rho^|i-j|
TemporalCovariance gen_ar1(int m, double rho);

// A^{-1} block-diagonal, each block a star with hub at the block's first
// index; spoke weights drawn from weight_range by the ER update rule.
TemporalCovariance gen_star_block(int m, int block_size, double weight_lo, double weight_hi,
                                  std::uint64_t seed);

// Banded Toeplitz moving-average covariance (Bartlett window):
// A_ij = max(0, 1 - |i-j|/(bandwidth+1)).
TemporalCovariance gen_ma(int m, int bandwidth);

}  // namespace kronsum

#endif  // KRONSUM_GRAPHGEN_HPP
