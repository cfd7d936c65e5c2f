// Copyright 2026 The qoct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qoct/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "qoct/io.hpp"
#include "qoct/nonmarkov.hpp"
#include "qoct/rng.hpp"

namespace qoct {

using nlohmann::json;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

std::ofstream open_csv(const std::string& dir, const std::string& name,
                       const std::string& hash) {
  ensure_dir(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# config_hash=" << hash << "\n";
  out << "# code_version=" << kVersion << "\n";
  return out;
}

std::string fmt_error(double e) {
  if (std::isnan(e)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10e", e);
  return buf;
}

std::string fmt_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", t);
  return buf;
}

/// Runs fn(0..n-1) on `workers` threads; any worker count yields the same
/// per-index results because each index is self-contained.
void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Axis column name derived from the JSON-pointer path.
std::string axis_name(const std::string& path) {
  std::string name = path;
  if (!name.empty() && name.front() == '/') name.erase(0, 1);
  std::replace(name.begin(), name.end(), '/', '.');
  return name;
}

SweepRow run_point(const json& point_config, std::uint64_t seed) {
  SweepRow row;
  row.seed = seed;
  try {
    RunConfig rc = parse_run_config(point_config);
    rc.optimization.seed = seed;
    const OperatorSet ops = build_operators(rc.model);
    const OptimizationResult res = optimize(ops, rc.optimization, rc.ramp);
    row.final_error = res.final_error;
    row.iterations = res.iterations;
    row.wall_time = res.wall_time;
    row.status = "ok";
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

}  // namespace

OptimizationResult run_optimize(const json& config, const HarnessOptions& options) {
  RunConfig rc = parse_run_config(config);
  if (options.seed) rc.optimization.seed = *options.seed;
  const std::string hash = config_hash_hex(config);
  const OperatorSet ops = build_operators(rc.model);
  const OptimizationResult result = optimize(ops, rc.optimization, rc.ramp);
  const auto conv = rc.model.frequency_convention;

  // Pulse in config units at slice centers.
  {
    std::ofstream out = open_csv(options.out_dir, "pulse.csv", hash);
    out << "t_ns,delta_mhz\n";
    const double dt = result.best_control.dt();
    for (int j = 0; j < result.best_control.n_slices; ++j) {
      out << format_double((j + 0.5) * dt, 10) << ","
          << format_double(freq_to_config(result.best_control.values(j), conv), 10) << "\n";
    }
  }
  {
    std::ofstream out = open_csv(options.out_dir, "error_history.csv", hash);
    out << "iteration,error\n";
    for (size_t i = 0; i < result.error_history.size(); ++i) {
      out << i << "," << fmt_error(result.error_history[i]) << "\n";
    }
  }

  int n_samples = 400;
  if (config.contains("nonmarkov") && config.at("nonmarkov").contains("n_samples")) {
    n_samples = config.at("nonmarkov").at("n_samples").get<int>();
  }
  const DeterminantTrace trace = determinant_trace(ops, result.best_control, n_samples);
  {
    std::ofstream out = open_csv(options.out_dir, "determinant_trace.csv", hash);
    out << "t_ns,det_abs\n";
    for (Eigen::Index m = 0; m < trace.times.size(); ++m) {
      out << format_double(trace.times(m), 10) << "," << fmt_error(trace.det_abs(m)) << "\n";
    }
  }
  {
    ensure_dir(options.out_dir);
    std::ofstream out(options.out_dir + "/summary.txt");
    out << "config_hash: " << hash << "\n";
    out << "code_version: " << kVersion << "\n";
    out << "final_error: " << fmt_error(result.final_error) << "\n";
    out << "iterations: " << result.iterations << "\n";
    out << "best_start: " << result.best_start << "\n";
    out << "status: " << result.status << "\n";
    out << "converged: " << (result.converged ? "true" : "false") << "\n";
    out << "gradient_norm_final: " << fmt_error(result.gradient_norm_final) << "\n";
    out << "wall_time_s: " << fmt_time(result.wall_time) << "\n";
    out << "markovian: " << (is_markovian(trace) ? "true" : "false") << "\n";
    out << "nonmarkovian_intervals:";
    for (const auto& [a, b] : trace.nonmarkovian_intervals) {
      out << " [" << format_double(a, 6) << "," << format_double(b, 6) << "]";
    }
    out << "\n";
    out << "error_history_length: " << result.error_history.size() << "\n";
  }
  return result;
}

SweepResult run_sweep(const json& config, const HarnessOptions& options) {
  if (!config.contains("sweep")) throw ConfigError("config: missing \"sweep\" section");
  const json& sj = config.at("sweep");
  for (const auto& [key, value] : sj.items()) {
    if (key != "axes" && key != "workers") {
      throw ConfigError("sweep: unknown key '" + key + "'");
    }
  }
  if (!sj.contains("axes") || !sj.at("axes").is_array() || sj.at("axes").empty()) {
    throw ConfigError("sweep.axes: expected a non-empty array");
  }
  if (sj.at("axes").size() > 2) throw ConfigError("sweep.axes: at most 2 axes supported");

  json base = config;
  base.erase("sweep");
  // Validate the base config once up front so axis errors surface early.
  (void)parse_run_config(base);

  std::vector<SweepAxis> axes;
  for (const json& aj : sj.at("axes")) {
    for (const auto& [key, value] : aj.items()) {
      if (key != "path" && key != "values") {
        throw ConfigError("sweep axis: unknown key '" + key + "'");
      }
    }
    SweepAxis axis;
    axis.path = aj.at("path").get<std::string>();
    axis.values = aj.at("values").get<std::vector<double>>();
    if (axis.values.empty()) throw ConfigError("sweep axis " + axis.path + ": empty values");
    const json::json_pointer ptr(axis.path);
    if (!base.contains(ptr)) {
      throw ConfigError("sweep axis path does not resolve into the config: " + axis.path);
    }
    axes.push_back(std::move(axis));
  }

  const std::uint64_t global_seed =
      options.seed ? *options.seed
                   : parse_run_config(base).optimization.seed;
  const int n0 = static_cast<int>(axes[0].values.size());
  const int n1 = axes.size() > 1 ? static_cast<int>(axes[1].values.size()) : 1;
  const int n_points = n0 * n1;

  SweepResult result;
  result.config_hash = config_hash_hex(config);
  for (const SweepAxis& a : axes) result.axis_names.push_back(axis_name(a.path));
  result.rows.resize(n_points);

  const int workers = options.workers > 0 ? options.workers : 1;
  parallel_for(n_points, workers, [&](int idx) {
    const int i = idx / n1;
    const int j = idx % n1;
    json point = base;
    point[json::json_pointer(axes[0].path)] = axes[0].values[i];
    if (axes.size() > 1) point[json::json_pointer(axes[1].path)] = axes[1].values[j];
    SweepRow row = run_point(point, derive_point_seed(global_seed, idx));
    row.grid_index = axes.size() > 1 ? std::vector<int>{i, j} : std::vector<int>{i};
    row.axis_values = axes.size() > 1 ? std::vector<double>{axes[0].values[i], axes[1].values[j]}
                                      : std::vector<double>{axes[0].values[i]};
    result.rows[idx] = std::move(row);
  });

  std::ofstream out = open_csv(options.out_dir, "sweep.csv", result.config_hash);
  out << "i";
  if (axes.size() > 1) out << ",j";
  for (const std::string& name : result.axis_names) out << "," << name;
  out << ",final_error,iterations,wall_time_s,seed,status\n";
  for (const SweepRow& row : result.rows) {
    out << row.grid_index[0];
    if (row.grid_index.size() > 1) out << "," << row.grid_index[1];
    for (double v : row.axis_values) out << "," << format_double(v, 10);
    out << "," << fmt_error(row.final_error) << "," << row.iterations << ","
        << fmt_time(row.wall_time) << "," << row.seed << "," << row.status << "\n";
  }
  return result;
}

SweepResult run_table1(const json& config, const HarnessOptions& options) {
  json base = config;
  base.erase("table1");
  RunConfig base_rc = parse_run_config(base);
  if (base_rc.model.tls.empty()) {
    throw ConfigError("table1: base model must contain the first defect");
  }
  const double d1_mhz =
      config.at("model").at("tls").at(0).value("detuning_mhz", 0.0);

  std::vector<double> delta2 = {50.0, 450.0};
  std::vector<double> s2 = {40.0, 10.0};
  std::vector<double> t12 = {2000.0, 200.0, 40.0};
  bool warm_start = true;
  if (config.contains("table1")) {
    const json& tj = config.at("table1");
    for (const auto& [key, value] : tj.items()) {
      if (key != "delta2_mhz" && key != "s2_mhz" && key != "t1_2_ns" && key != "warm_start") {
        throw ConfigError("table1: unknown key '" + key + "'");
      }
    }
    if (tj.contains("delta2_mhz")) delta2 = tj.at("delta2_mhz").get<std::vector<double>>();
    if (tj.contains("s2_mhz")) s2 = tj.at("s2_mhz").get<std::vector<double>>();
    if (tj.contains("t1_2_ns")) t12 = tj.at("t1_2_ns").get<std::vector<double>>();
    if (tj.contains("warm_start")) warm_start = tj.at("warm_start").get<bool>();
  }

  const std::uint64_t global_seed = options.seed ? *options.seed : base_rc.optimization.seed;

  std::optional<RealVector> warm_values;
  if (warm_start) {
    RunConfig rc = base_rc;
    rc.optimization.seed = derive_point_seed(global_seed, 1u << 20);
    const OperatorSet ops = build_operators(rc.model);
    warm_values = optimize(ops, rc.optimization, rc.ramp).best_control.values;
  }

  const int n_points = static_cast<int>(delta2.size() * s2.size() * t12.size());
  SweepResult result;
  result.config_hash = config_hash_hex(config);
  result.axis_names = {"delta2_mhz", "s2_mhz", "t1_2_ns"};
  result.rows.resize(n_points);

  parallel_for(n_points, std::max(1, options.workers), [&](int idx) {
    const int nt = static_cast<int>(t12.size());
    const int ns = static_cast<int>(s2.size());
    const int i = idx / (ns * nt);
    const int j = (idx / nt) % ns;
    const int k = idx % nt;
    json point = base;
    point["model"]["tls"][1] = {{"detuning_mhz", d1_mhz + delta2[i]},
                                {"coupling_mhz", s2[j]},
                                {"t1_ns", t12[k]}};
    SweepRow row;
    row.seed = derive_point_seed(global_seed, idx);
    try {
      RunConfig rc = parse_run_config(point);
      rc.optimization.seed = row.seed;
      if (warm_values) rc.optimization.initial_control = warm_values;
      const OperatorSet ops = build_operators(rc.model);
      const OptimizationResult res = optimize(ops, rc.optimization, rc.ramp);
      row.final_error = res.final_error;
      row.iterations = res.iterations;
      row.wall_time = res.wall_time;
      row.status = "ok";
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
    row.grid_index = {i, j, k};
    row.axis_values = {delta2[i], s2[j], t12[k]};
    result.rows[idx] = std::move(row);
  });

  std::ofstream out = open_csv(options.out_dir, "table1.csv", result.config_hash);
  out << "delta2_mhz,s2_mhz,t1_2_ns,final_error,iterations,wall_time_s,seed,status\n";
  for (const SweepRow& row : result.rows) {
    out << format_double(row.axis_values[0], 10) << "," << format_double(row.axis_values[1], 10)
        << "," << format_double(row.axis_values[2], 10) << "," << fmt_error(row.final_error)
        << "," << row.iterations << "," << fmt_time(row.wall_time) << "," << row.seed << ","
        << row.status << "\n";
  }
  return result;
}

SweepResult run_random_targets(int n, const json& config, const HarnessOptions& options) {
  if (n < 1) throw ConfigError("random-targets: n must be >= 1");
  RunConfig base_rc = parse_run_config(config);
  const std::uint64_t global_seed = options.seed ? *options.seed : base_rc.optimization.seed;
  const int n_levels = base_rc.model.qudit.n_levels;
  const OperatorSet ops = build_operators(base_rc.model);

  const int n_rows = n + 1;  // row 0: the configured target (reference)
  SweepResult result;
  result.config_hash = config_hash_hex(config);
  result.axis_names = {};
  for (int p = 0; p < n_levels; ++p) result.axis_names.push_back("phi" + std::to_string(p));
  result.rows.resize(n_rows);

  parallel_for(n_rows, std::max(1, options.workers), [&](int idx) {
    RunConfig rc = base_rc;
    rc.optimization.seed = derive_point_seed(global_seed, idx);
    if (idx > 0) {
      rc.optimization.target =
          random_diagonal_target(n_levels, derive_point_seed(global_seed, 100000 + idx));
    }
    SweepRow row;
    row.seed = rc.optimization.seed;
    row.grid_index = {idx};
    for (int p = 0; p < n_levels; ++p) {
      const Complex z = rc.optimization.target(p, p);
      row.axis_values.push_back(std::atan2(z.imag(), z.real()));
    }
    try {
      const OptimizationResult res = optimize(ops, rc.optimization, rc.ramp);
      row.final_error = res.final_error;
      row.iterations = res.iterations;
      row.wall_time = res.wall_time;
      row.status = "ok";
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
    result.rows[idx] = std::move(row);
  });

  std::ofstream out = open_csv(options.out_dir, "random_targets.csv", result.config_hash);
  out << "idx";
  for (const std::string& name : result.axis_names) out << "," << name;
  out << ",final_error,iterations,wall_time_s,seed,status\n";
  for (const SweepRow& row : result.rows) {
    out << row.grid_index[0];
    for (double v : row.axis_values) out << "," << format_double(v, 10);
    out << "," << fmt_error(row.final_error) << "," << row.iterations << ","
        << fmt_time(row.wall_time) << "," << row.seed << "," << row.status << "\n";
  }

  // Batch summary over the random rows, with the reference row as baseline.
  std::vector<double> errs;
  for (int i = 1; i < n_rows; ++i) {
    if (result.rows[i].status == "ok") errs.push_back(result.rows[i].final_error);
  }
  std::ofstream sum(options.out_dir + "/random_targets_summary.txt");
  sum << "config_hash: " << result.config_hash << "\n";
  sum << "reference_error: " << fmt_error(result.rows[0].final_error) << "\n";
  sum << "n_random: " << errs.size() << "\n";
  if (!errs.empty()) {
    std::sort(errs.begin(), errs.end());
    const double median = errs.size() % 2 == 1
                              ? errs[errs.size() / 2]
                              : 0.5 * (errs[errs.size() / 2 - 1] + errs[errs.size() / 2]);
    sum << "min_error: " << fmt_error(errs.front()) << "\n";
    sum << "max_error: " << fmt_error(errs.back()) << "\n";
    sum << "median_error: " << fmt_error(median) << "\n";
    sum << "max_over_min: " << fmt_error(errs.back() / errs.front()) << "\n";
    sum << "max_over_reference: " << fmt_error(errs.back() / result.rows[0].final_error)
        << "\n";
  }
  return result;
}

}  // namespace qoct
