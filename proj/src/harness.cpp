#include "kronsum/harness.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "kronsum/io.hpp"
#include "kronsum/metrics.hpp"
#include "kronsum/sampler.hpp"
#include "kronsum/spatial.hpp"
#include "kronsum/temporal.hpp"

namespace kronsum {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "' for " + what);
  }
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse integer '" + s + "' for " + what);
  }
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse seed '" + s + "' for " + what);
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t index) {
  return mix64(mix64(base ^ mix64(tag)) ^ (index * 0x9e3779b97f4a7c15ULL));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

TopologyASpec parse_topology_a(const std::string& text) {
  auto toks = split_ws(text);
  if (toks.empty()) throw ConfigError("topology_a: empty specification");
  TopologyASpec spec;
  const std::string& kind = toks[0];
  if (kind == "ar1")
    spec.kind = TemporalTopology::ar1;
  else if (kind == "star_block")
    spec.kind = TemporalTopology::star_block;
  else if (kind == "ma")
    spec.kind = TemporalTopology::ma;
  else
    throw ConfigError("topology_a: unknown kind '" + kind + "' (ar1|star_block|ma)");

  for (std::size_t i = 1; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string::npos)
      throw ConfigError("topology_a: expected param=value, got '" + toks[i] + "'");
    std::string key = toks[i].substr(0, eq);
    std::string val = toks[i].substr(eq + 1);
    if (key == "rho" && spec.kind == TemporalTopology::ar1)
      spec.rho = parse_double(val, "topology_a.rho");
    else if (key == "block_size" && spec.kind == TemporalTopology::star_block)
      spec.block_size = static_cast<int>(parse_int(val, "topology_a.block_size"));
    else if (key == "weight_lo" && spec.kind == TemporalTopology::star_block)
      spec.weight_lo = parse_double(val, "topology_a.weight_lo");
    else if (key == "weight_hi" && spec.kind == TemporalTopology::star_block)
      spec.weight_hi = parse_double(val, "topology_a.weight_hi");
    else if (key == "seed" && spec.kind == TemporalTopology::star_block)
      spec.seed = parse_u64(val, "topology_a.seed");
    else if (key == "bandwidth" && spec.kind == TemporalTopology::ma)
      spec.bandwidth = static_cast<int>(parse_int(val, "topology_a.bandwidth"));
    else
      throw ConfigError("topology_a: unknown parameter '" + key + "' for kind " + kind);
  }
  return spec;
}

TopologyBSpec parse_topology_b(const std::string& text) {
  auto toks = split_ws(text);
  if (toks.empty()) throw ConfigError("topology_b: empty specification");
  TopologyBSpec spec;
  const std::string& kind = toks[0];
  if (kind == "er")
    spec.kind = SpatialTopology::er;
  else if (kind == "grid")
    spec.kind = SpatialTopology::grid;
  else
    throw ConfigError("topology_b: unknown kind '" + kind + "' (er|grid)");

  for (std::size_t i = 1; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string::npos)
      throw ConfigError("topology_b: expected param=value, got '" + toks[i] + "'");
    std::string key = toks[i].substr(0, eq);
    std::string val = toks[i].substr(eq + 1);
    if (key == "initial_edges")
      spec.initial_edges = static_cast<int>(parse_int(val, "topology_b.initial_edges"));
    else if (key == "churn")
      spec.churn = static_cast<int>(parse_int(val, "topology_b.churn"));
    else if (key == "num_change_points")
      spec.num_change_points = static_cast<int>(parse_int(val, "topology_b.num_change_points"));
    else if (key == "weight_lo")
      spec.weight_lo = parse_double(val, "topology_b.weight_lo");
    else if (key == "weight_hi")
      spec.weight_hi = parse_double(val, "topology_b.weight_hi");
    else if (key == "seed")
      spec.seed = parse_u64(val, "topology_b.seed");
    else
      throw ConfigError("topology_b: unknown parameter '" + key + "'");
  }
  return spec;
}

TemporalCovariance build_topology_a(const TopologyASpec& spec, int m) {
  switch (spec.kind) {
    case TemporalTopology::ar1:
      return gen_ar1(m, spec.rho);
    case TemporalTopology::star_block:
      return gen_star_block(m, spec.block_size, spec.weight_lo, spec.weight_hi,
                            derive_seed(spec.seed, 3, static_cast<std::uint64_t>(m)));
    case TemporalTopology::ma:
      return gen_ma(m, spec.bandwidth);
    case TemporalTopology::custom:
      break;
  }
  throw ConfigError("build_topology_a: unsupported kind");
}

TrajectoryGraphs build_topology_b(const TopologyBSpec& spec, int n, int m,
                                  std::uint64_t seed_override) {
  TrajectorySpec t;
  t.n = n;
  t.m = m;
  t.initial_edges = spec.initial_edges;
  t.churn = spec.churn;
  t.num_change_points = spec.num_change_points;
  t.weight_lo = spec.weight_lo;
  t.weight_hi = spec.weight_hi;
  t.topology = spec.kind;
  t.seed = seed_override;
  return spec.kind == SpatialTopology::er ? gen_er_trajectory(t) : gen_grid_trajectory(t);
}

std::vector<double> T0Spec::expand(int m) const {
  std::vector<double> out;
  switch (kind) {
    case Kind::all:
      for (int i = 1; i <= m; ++i) out.push_back(double(i) / m);
      break;
    case Kind::interior:
      for (int j = 1; j <= count; ++j) out.push_back(double(j) / (count + 1));
      break;
    case Kind::list:
      out = values;
      break;
  }
  return out;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_topology_a = false, have_topology_b = false, have_n = false, have_m = false,
       have_lambda = false, have_seeds = false;

  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");

    if (key == "topology_a") {
      config.topology_a = parse_topology_a(val);
      have_topology_a = true;
    } else if (key == "topology_b") {
      config.topology_b = parse_topology_b(val);
      have_topology_b = true;
    } else if (key == "n") {
      config.n = static_cast<int>(parse_int(val, "n"));
      have_n = true;
    } else if (key == "m_grid") {
      for (const std::string& tok : split_on(val, ','))
        config.m_grid.push_back(static_cast<int>(parse_int(tok, "m_grid")));
      have_m = true;
    } else if (key == "lambda_grid") {
      for (const std::string& tok : split_on(val, ',')) {
        LambdaSpec ls;
        if (tok == "rule") {
          ls.rule = true;
          ls.value = 1.0;
        } else if (tok.rfind("rule*", 0) == 0) {
          ls.rule = true;
          ls.value = parse_double(tok.substr(5), "lambda_grid rule multiplier");
        } else {
          ls.value = parse_double(tok, "lambda_grid");
        }
        config.lambda_grid.push_back(ls);
      }
      have_lambda = true;
    } else if (key == "h") {
      if (val == "rule") {
        config.h = {true, 1.0};
      } else if (val.rfind("rule*", 0) == 0) {
        config.h = {true, parse_double(val.substr(5), "h rule multiplier")};
      } else {
        config.h = {false, parse_double(val, "h")};
        if (!(config.h.value > 0.0 && config.h.value <= 1.0))
          throw ConfigError("h must lie in (0, 1]");
      }
    } else if (key == "t0_grid") {
      if (val == "all") {
        config.t0_grid.kind = T0Spec::Kind::all;
      } else if (val.rfind("interior:", 0) == 0) {
        config.t0_grid.kind = T0Spec::Kind::interior;
        config.t0_grid.count = static_cast<int>(parse_int(val.substr(9), "t0_grid interior"));
        if (config.t0_grid.count < 1) throw ConfigError("t0_grid: interior count must be >= 1");
      } else {
        config.t0_grid.kind = T0Spec::Kind::list;
        for (const std::string& tok : split_on(val, ',')) {
          double t = parse_double(tok, "t0_grid");
          if (t < 0.0 || t > 1.0) throw ConfigError("t0_grid values must lie in [0,1]");
          config.t0_grid.values.push_back(t);
        }
      }
    } else if (key == "num_seeds") {
      config.num_seeds = static_cast<int>(parse_int(val, "num_seeds"));
      have_seeds = true;
    } else if (key == "trace_a_mode") {
      if (val == "exact") {
        config.trace_a_mode.kind = TraceASpec::Kind::exact;
      } else if (val == "auto") {
        config.trace_a_mode.kind = TraceASpec::Kind::auto_tune;
      } else {
        config.trace_a_mode.kind = TraceASpec::Kind::fixed;
        config.trace_a_mode.value = parse_double(val, "trace_a_mode");
        if (config.trace_a_mode.value < 0.0) throw ConfigError("trace_a_mode value must be >= 0");
      }
    } else if (key == "output_dir") {
      config.output_dir = val;
    } else if (key == "target") {
      if (val == "b")
        config.target = Target::b;
      else if (val == "a")
        config.target = Target::a;
      else if (val == "both")
        config.target = Target::both;
      else
        throw ConfigError("target must be b, a, or both");
    } else if (key == "num_workers") {
      config.num_workers = static_cast<int>(parse_int(val, "num_workers"));
      if (config.num_workers < 0) throw ConfigError("num_workers must be >= 0");
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }

  if (!have_topology_a) throw ConfigError("config: missing topology_a");
  if (!have_topology_b) throw ConfigError("config: missing topology_b");
  if (!have_n) throw ConfigError("config: missing n");
  if (!have_m) throw ConfigError("config: missing m_grid");
  if (!have_lambda) throw ConfigError("config: missing lambda_grid");
  if (!have_seeds) throw ConfigError("config: missing num_seeds");
  if (config.n < 2) throw ConfigError("config: n must be at least 2");
  if (config.m_grid.empty()) throw ConfigError("config: m_grid is empty");
  for (int m : config.m_grid)
    if (m < 2) throw ConfigError("config: every m must be at least 2");
  if (config.lambda_grid.empty()) throw ConfigError("config: lambda_grid is empty");
  if (config.num_seeds < 1) throw ConfigError("config: num_seeds must be >= 1");
  return config;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

namespace {

struct PerM {
  TemporalCovariance a;
  Matrix sqrt_a;
  Matrix a_inverse;
  std::vector<Edge> a_support;
};

struct Task {
  int m_index = 0;
  int seed_index = 0;  // 0-based
};

void run_task(const ExperimentConfig& config, const std::vector<PerM>& per_m, const Task& task,
              std::vector<ResultRow>& rows, std::vector<CellError>& errors) {
  const int m = config.m_grid[task.m_index];
  const int seed_label = task.seed_index + 1;
  const PerM& prep = per_m[task.m_index];

  auto task_error = [&](double lambda, double t0, char target, const std::string& msg) {
    errors.push_back({seed_label, m, lambda, t0, target, msg});
  };

  TrajectoryGraphs traj;
  DataMatrix data{Matrix()};
  double trace_a_used = 0.0;
  double h_used = 0.0;
  try {
    std::uint64_t traj_seed =
        derive_seed(config.topology_b.seed, 1,
                    static_cast<std::uint64_t>(m) * 1000003ULL + task.seed_index);
    traj = build_topology_b(config.topology_b, config.n, m, traj_seed);
    KroneckerSumModel model = KroneckerSumModel::make(prep.a, traj.trajectory);
    SamplerPlan plan = SamplerPlan::from_model(model, prep.sqrt_a);
    std::uint64_t sample_seed =
        derive_seed(config.topology_b.seed, 2,
                    static_cast<std::uint64_t>(m) * 1000003ULL + task.seed_index);
    data = sample_data(plan, InnovationLaw::gaussian, sample_seed);

    switch (config.trace_a_mode.kind) {
      case TraceASpec::Kind::exact: trace_a_used = model.trace_a; break;
      case TraceASpec::Kind::auto_tune: trace_a_used = tune_trace_a(data); break;
      case TraceASpec::Kind::fixed: trace_a_used = config.trace_a_mode.value; break;
    }
    h_used = config.h.rule ? bandwidth_rule(m, config.h.value) : config.h.value;
  } catch (const std::exception& e) {
    task_error(-1.0, -1.0, config.target == Target::a ? 'a' : 'b',
               std::string("cell setup failed: ") + e.what());
    return;
  }

  Kernel kernel{KernelKind::epanechnikov, h_used};

  if (config.target == Target::b || config.target == Target::both) {
    for (double t0 : config.t0_grid.expand(m)) {
      Matrix theta_true = traj.theta_at(t0);
      Matrix b_true = symmetrized(
          Eigen::LLT<Matrix>(theta_true).solve(Matrix::Identity(config.n, config.n)));
      std::vector<Edge> support_true = traj.support_at(t0);
      for (const LambdaSpec& ls : config.lambda_grid) {
        double lambda = ls.rule ? ls.value * lambda_rule_b(m, 1.0) : ls.value;
        try {
          auto start = std::chrono::steady_clock::now();
          BEstimate est = estimate_b(data, t0, kernel, trace_a_used, lambda);
          auto stop = std::chrono::steady_clock::now();
          ResultRow row;
          row.seed = seed_label;
          row.m = m;
          row.n = config.n;
          row.lambda = lambda;
          row.h = h_used;
          row.t0 = t0;
          row.mcc = mcc(confusion_counts(edge_support(est.theta_hat), support_true, config.n));
          row.rel_fro = rel_frobenius(est.b_hat, b_true);
          row.rel_l2 = rel_spectral(est.b_hat, b_true);
          row.wall_time_ms =
              std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
                  .count();
          row.target = 'b';
          rows.push_back(row);
        } catch (const std::exception& e) {
          task_error(lambda, t0, 'b', e.what());
        }
      }
    }
  }

  if (config.target == Target::a || config.target == Target::both) {
    for (const LambdaSpec& ls : config.lambda_grid) {
      double lambda = ls.rule ? ls.value * lambda_rule_a(m, config.n, 1.0) : ls.value;
      try {
        auto start = std::chrono::steady_clock::now();
        AEstimate est = estimate_a(data, trace_a_used, kernel, lambda);
        auto stop = std::chrono::steady_clock::now();
        ResultRow row;
        row.seed = seed_label;
        row.m = m;
        row.n = config.n;
        row.lambda = lambda;
        row.h = h_used;
        row.t0 = -1.0;
        row.mcc = mcc(confusion_counts(edge_support(est.rho_hat), prep.a_support, m));
        row.rel_fro = rel_frobenius(est.a_hat, prep.a.matrix);
        row.rel_l2 = rel_spectral(est.a_hat, prep.a.matrix);
        row.wall_time_ms =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
                .count();
        row.target = 'a';
        rows.push_back(row);
      } catch (const std::exception& e) {
        task_error(lambda, -1.0, 'a', e.what());
      }
    }
  }
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& config) {
  // per-m preparation: A, its symmetric square root, its precision support
  std::vector<PerM> per_m(config.m_grid.size());
  {
    std::vector<std::thread> prep_threads;
    std::vector<std::string> prep_errors(config.m_grid.size());
    for (std::size_t i = 0; i < config.m_grid.size(); ++i) {
      prep_threads.emplace_back([&, i]() {
        try {
          PerM p;
          p.a = build_topology_a(config.topology_a, config.m_grid[i]);
          p.sqrt_a = sqrt_psd(p.a.matrix);
          Eigen::LLT<Matrix> llt(p.a.matrix);
          p.a_inverse = symmetrized(
              llt.solve(Matrix::Identity(config.m_grid[i], config.m_grid[i])));
          p.a_support = edge_support(p.a_inverse, 1e-8 * max_abs(p.a_inverse));
          per_m[i] = std::move(p);
        } catch (const std::exception& e) {
          prep_errors[i] = e.what();
        }
      });
    }
    for (auto& t : prep_threads) t.join();
    for (std::size_t i = 0; i < prep_errors.size(); ++i)
      if (!prep_errors[i].empty())
        throw std::runtime_error("run_experiment: building A for m = " +
                                 std::to_string(config.m_grid[i]) + " failed: " + prep_errors[i]);
  }

  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < config.m_grid.size(); ++mi)
    for (int s = 0; s < config.num_seeds; ++s) tasks.push_back({static_cast<int>(mi), s});

  unsigned workers = config.num_workers > 0
                         ? static_cast<unsigned>(config.num_workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, tasks.size());

  ResultTable table;
  std::mutex table_mutex;
  std::atomic<std::size_t> next_task{0};

  auto worker = [&]() {
    for (;;) {
      std::size_t idx = next_task.fetch_add(1);
      if (idx >= tasks.size()) return;
      std::vector<ResultRow> rows;
      std::vector<CellError> errors;
      run_task(config, per_m, tasks[idx], rows, errors);
      std::lock_guard<std::mutex> lock(table_mutex);
      table.rows.insert(table.rows.end(), rows.begin(), rows.end());
      table.errors.insert(table.errors.end(), errors.begin(), errors.end());
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  auto row_key = [](const ResultRow& r) {
    return std::make_tuple(r.target, r.m, r.seed, r.lambda, r.t0);
  };
  std::sort(table.rows.begin(), table.rows.end(),
            [&](const ResultRow& a, const ResultRow& b) { return row_key(a) < row_key(b); });
  std::sort(table.errors.begin(), table.errors.end(), [](const CellError& a, const CellError& b) {
    return std::make_tuple(a.target, a.m, a.seed, a.lambda, a.t0, a.message) <
           std::make_tuple(b.target, b.m, b.seed, b.lambda, b.t0, b.message);
  });
  return table;
}

std::string results_to_csv(const ResultTable& table) {
  std::string out = "seed,m,n,lambda,h,t0,mcc,rel_fro,rel_l2,target\n";
  for (const ResultRow& r : table.rows) {
    out += std::to_string(r.seed) + ',' + std::to_string(r.m) + ',' + std::to_string(r.n) + ',';
    out += format_double(r.lambda) + ',' + format_double(r.h) + ',' + format_double(r.t0) + ',';
    out += format_double(r.mcc) + ',' + format_double(r.rel_fro) + ',' +
           format_double(r.rel_l2) + ',';
    out += r.target;
    out += '\n';
  }
  return out;
}

std::string timings_to_csv(const ResultTable& table) {
  std::string out = "seed,m,lambda,t0,target,wall_time_ms\n";
  for (const ResultRow& r : table.rows) {
    out += std::to_string(r.seed) + ',' + std::to_string(r.m) + ',';
    out += format_double(r.lambda) + ',' + format_double(r.t0) + ',';
    out += r.target;
    out += ',' + format_double(r.wall_time_ms) + '\n';
  }
  return out;
}

std::string errors_to_csv(const ResultTable& table) {
  std::string out = "seed,m,lambda,t0,target,message\n";
  for (const CellError& e : table.errors) {
    std::string msg = e.message;
    for (char& c : msg)
      if (c == '"') c = '\'';
    out += std::to_string(e.seed) + ',' + std::to_string(e.m) + ',';
    out += format_double(e.lambda) + ',' + format_double(e.t0) + ',';
    out += e.target;
    out += ",\"" + msg + "\"\n";
  }
  return out;
}

void emit_plot_data(const ResultTable& table, const std::vector<std::string>& group_by,
                    const std::string& output_dir) {
  if (table.rows.empty()) throw std::invalid_argument("emit_plot_data: empty result table");
  for (const std::string& f : group_by)
    if (f != "m" && f != "n" && f != "h" && f != "target")
      throw std::invalid_argument("emit_plot_data: unknown group field '" + f + "'");

  std::filesystem::create_directories(output_dir);

  auto group_tag = [&](const ResultRow& r) {
    std::string tag;
    for (const std::string& f : group_by) {
      if (f == "m") tag += "_m" + std::to_string(r.m);
      if (f == "n") tag += "_n" + std::to_string(r.n);
      if (f == "h") tag += "_h" + format_short(r.h);
      if (f == "target") tag += std::string("_target") + r.target;
    }
    return tag;
  };

  struct MetricDef {
    const char* name;
    double ResultRow::* field;
  };
  const MetricDef metrics[] = {{"mcc", &ResultRow::mcc},
                               {"rel_fro", &ResultRow::rel_fro},
                               {"rel_l2", &ResultRow::rel_l2}};

  for (const MetricDef& metric : metrics) {
    // group -> lambda -> seed -> values
    std::map<std::string, std::map<double, std::map<int, std::vector<double>>>> grouped;
    for (const ResultRow& r : table.rows)
      grouped[group_tag(r)][r.lambda][r.seed].push_back(r.*metric.field);

    for (const auto& [tag, by_lambda] : grouped) {
      std::string content = "lambda,mean,stderr\n";
      for (const auto& [lambda, by_seed] : by_lambda) {
        std::vector<double> seed_means;
        for (const auto& [seed, vals] : by_seed) {
          double s = 0.0;
          for (double v : vals) s += v;
          seed_means.push_back(s / vals.size());
        }
        double mean = 0.0;
        for (double v : seed_means) mean += v;
        mean /= seed_means.size();
        double se = 0.0;
        if (seed_means.size() > 1) {
          double ss = 0.0;
          for (double v : seed_means) ss += (v - mean) * (v - mean);
          se = std::sqrt(ss / (seed_means.size() - 1)) / std::sqrt(double(seed_means.size()));
        }
        content += format_double(lambda) + ',' + format_double(mean) + ',' + format_double(se) +
                   '\n';
      }
      write_text(content,
                 (std::filesystem::path(output_dir) / (std::string(metric.name) + tag + ".csv"))
                     .string());
    }
  }
}

void write_experiment_outputs(const ExperimentConfig& config, const ResultTable& table) {
  if (config.output_dir.empty())
    throw std::invalid_argument("write_experiment_outputs: config has no output_dir");
  std::filesystem::create_directories(config.output_dir);
  auto dir = std::filesystem::path(config.output_dir);
  write_text(results_to_csv(table), (dir / "results.csv").string());
  write_text(timings_to_csv(table), (dir / "timings.csv").string());
  if (!table.errors.empty()) write_text(errors_to_csv(table), (dir / "errors.csv").string());
  if (!table.rows.empty()) {
    std::vector<std::string> group_by;
    if (config.target == Target::both) group_by = {"target", "m"};
    else group_by = {"m"};
    emit_plot_data(table, group_by, (dir / "plots").string());
  }
}

}  // namespace kronsum
