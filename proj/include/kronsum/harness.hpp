#ifndef KRONSUM_HARNESS_HPP
#define KRONSUM_HARNESS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kronsum/graphgen.hpp"
#include "kronsum/kernel.hpp"
#include "kronsum/model.hpp"

namespace kronsum {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TopologyASpec {
  TemporalTopology kind = TemporalTopology::ar1;
  double rho = 0.5;                          // ar1
  int block_size = 20;                       // star_block
  double weight_lo = 0.1, weight_hi = 0.3;   // star_block
  std::uint64_t seed = 1;                    // star_block
  int bandwidth = 15;                        // ma
};

struct TopologyBSpec {
  SpatialTopology kind = SpatialTopology::er;
  int initial_edges = 100;
  int churn = 5;
  int num_change_points = 5;
  double weight_lo = 0.1, weight_hi = 0.3;
  std::uint64_t seed = 1;
};

// e.g. "ar1 rho=0.5", "star_block block_size=20 seed=7", "ma bandwidth=15"
TopologyASpec parse_topology_a(const std::string& text);
// e.g. "er initial_edges=100 churn=5 num_change_points=5 seed=1"
TopologyBSpec parse_topology_b(const std::string& text);

TemporalCovariance build_topology_a(const TopologyASpec& spec, int m);
TrajectoryGraphs build_topology_b(const TopologyBSpec& spec, int n, int m,
                                  std::uint64_t seed_override);

struct LambdaSpec {
  bool rule = false;  // value multiplies the theorem rate for the target
  double value = 0.0;
};

struct BandwidthSpec {
  bool rule = true;
  double value = 1.0;  // rule multiplier, or the literal bandwidth
};

struct T0Spec {
  enum class Kind { all, interior, list } kind = Kind::all;
  int count = 0;
  std::vector<double> values;

  std::vector<double> expand(int m) const;
};

struct TraceASpec {
  enum class Kind { exact, auto_tune, fixed } kind = Kind::exact;
  double value = 0.0;
};

enum class Target { b, a, both };

struct ExperimentConfig {
  TopologyASpec topology_a;
  TopologyBSpec topology_b;
  int n = 0;
  std::vector<int> m_grid;
  std::vector<LambdaSpec> lambda_grid;
  BandwidthSpec h;
  T0Spec t0_grid;
  int num_seeds = 1;
  TraceASpec trace_a_mode;
  std::string output_dir;
  Target target = Target::b;
  int num_workers = 0;  // 0 = hardware concurrency

  // Flat key = value text; '#' comments; unknown keys are errors.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);
};

struct ResultRow {
  int seed = 0;  // 1-based seed index
  int m = 0;
  int n = 0;
  double lambda = 0.0;
  double h = 0.0;
  double t0 = 0.0;  // -1 for target-a rows
  double mcc = 0.0;
  double rel_fro = 0.0;
  double rel_l2 = 0.0;
  double wall_time_ms = 0.0;
  char target = 'b';
};

struct CellError {
  int seed = 0;
  int m = 0;
  double lambda = 0.0;
  double t0 = 0.0;
  char target = 'b';
  std::string message;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<CellError> errors;
};

// Runs the full grid; per-cell failures land in the errors sidecar and the
// run continues. Deterministic given the config (rows sorted by key).
ResultTable run_experiment(const ExperimentConfig& config);

// results.csv content: every ResultRow field except wall_time_ms, which is
// nondeterministic and lives in the timings sidecar.
std::string results_to_csv(const ResultTable& table);
std::string timings_to_csv(const ResultTable& table);
std::string errors_to_csv(const ResultTable& table);

// One CSV per metric and group value: rows lambda,mean,stderr sorted by
// lambda; mean over seeds of per-seed means, stderr = sample std / sqrt(#seeds).
// Files are named <metric>_<field><value>.csv under output_dir.
void emit_plot_data(const ResultTable& table, const std::vector<std::string>& group_by,
                    const std::string& output_dir);

// results.csv + timings.csv + errors.csv (when any) + plot data grouped by m.
void write_experiment_outputs(const ExperimentConfig& config, const ResultTable& table);

}  // namespace kronsum

#endif  // KRONSUM_HARNESS_HPP
