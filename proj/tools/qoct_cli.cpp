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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qoct/cartan.hpp"
#include "qoct/config.hpp"
#include "qoct/io.hpp"
#include "qoct/liealg.hpp"
#include "qoct/lindblad.hpp"
#include "qoct/nonmarkov.hpp"
#include "qoct/sweep.hpp"

namespace {

using qoct::Complex;
using qoct::RealVector;

struct CommonArgs {
  std::string config_path;
  std::optional<std::int64_t> seed;
  int workers = 1;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.config_path, "JSON configuration file");
  if (config_required) opt->required();
  cmd->add_option("--seed", args.seed, "Override the global seed from the config");
  cmd->add_option("--workers", args.workers, "Worker threads for grid runs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", args.out_dir, "Output directory (created if absent)");
}

qoct::HarnessOptions harness_options(const CommonArgs& args) {
  qoct::HarnessOptions options;
  if (args.seed) options.seed = static_cast<std::uint64_t>(*args.seed);
  options.workers = args.workers;
  options.out_dir = args.out_dir;
  return options;
}

/// Builds the control for simulate/nonmarkov: an explicit pulse CSV
/// (t_ns,delta_mhz rows as written by `optimize`) wins; otherwise the
/// config's initial_control; otherwise the zero pulse.
qoct::PiecewiseControl resolve_control(const qoct::RunConfig& rc,
                                       const std::string& pulse_path) {
  qoct::PiecewiseControl control;
  control.total_time = rc.optimization.total_time;
  // n_slices == 0 means "default grid" (10 slices per ns), resolved here the
  // same way the optimizer resolves it.
  control.n_slices =
      rc.optimization.n_slices > 0
          ? rc.optimization.n_slices
          : static_cast<int>(std::llround(rc.optimization.total_time * 10.0));
  control.ramp = rc.ramp;
  if (!pulse_path.empty()) {
    std::ifstream in(pulse_path);
    if (!in) throw std::runtime_error("cannot open pulse file: " + pulse_path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.rfind("t_ns", 0) == 0) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) {
        throw std::runtime_error("pulse file: expected 't,delta' rows: " + line);
      }
      values.push_back(qoct::freq_to_internal(std::stod(line.substr(comma + 1)),
                                              rc.model.frequency_convention));
    }
    if (values.empty()) throw std::runtime_error("pulse file contains no samples");
    control.n_slices = static_cast<int>(values.size());
    control.values = Eigen::Map<const RealVector>(values.data(), values.size());
  } else if (rc.optimization.initial_control) {
    control.values = *rc.optimization.initial_control;
  } else {
    control.values = RealVector::Zero(control.n_slices);
  }
  return control;
}

int run_nonmarkov(const CommonArgs& args, const std::string& pulse_path, int n_samples) {
  const nlohmann::json config = qoct::load_json(args.config_path);
  const qoct::RunConfig rc = qoct::parse_run_config(config);
  const qoct::OperatorSet ops = qoct::build_operators(rc.model);
  const qoct::PiecewiseControl control = resolve_control(rc, pulse_path);
  const qoct::DeterminantTrace trace = qoct::determinant_trace(ops, control, n_samples);

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  const std::string path = args.out_dir + "/determinant_trace.csv";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# config_hash=" << qoct::config_hash_hex(config) << "\n";
  out << "# code_version=" << qoct::kVersion << "\n";
  out << "t_ns,det_abs\n";
  for (Eigen::Index m = 0; m < trace.times.size(); ++m) {
    out << qoct::format_double(trace.times(m), 10) << ","
        << qoct::format_double(trace.det_abs(m), 10) << "\n";
  }
  std::cout << "markovian: " << (qoct::is_markovian(trace) ? "true" : "false") << "\n";
  std::cout << "n_intervals: " << trace.nonmarkovian_intervals.size() << "\n";
  for (const auto& [a, b] : trace.nonmarkovian_intervals) {
    std::cout << "interval: [" << qoct::format_double(a, 6) << ", "
              << qoct::format_double(b, 6) << "] ns\n";
  }
  std::cout << "wrote: " << path << "\n";
  return 0;
}

int run_cartan(const std::string& matrix_path, const std::string& out_dir) {
  const qoct::Matrix u = qoct::read_matrix(matrix_path);
  const qoct::KakDecomposition kak = qoct::kak_decompose(u);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  qoct::write_matrix(out_dir + "/k1.txt", kak.k1.cast<Complex>());
  qoct::write_matrix(out_dir + "/k2.txt", kak.k2.cast<Complex>());
  std::ofstream phases(out_dir + "/phases.csv");
  phases << "index,phase_rad\n";
  for (Eigen::Index j = 0; j < kak.a_phases.size(); ++j) {
    phases << j << "," << qoct::format_double(kak.a_phases(j)) << "\n";
  }
  std::cout << "residual: " << qoct::format_double(kak.residual, 6) << "\n";
  std::cout << "k1_special_orthogonal: "
            << (qoct::is_special_orthogonal(kak.k1, 1e-10) ? "true" : "false") << "\n";
  std::cout << "k2_special_orthogonal: "
            << (qoct::is_special_orthogonal(kak.k2, 1e-10) ? "true" : "false") << "\n";
  std::cout << "phases_rad:";
  for (Eigen::Index j = 0; j < kak.a_phases.size(); ++j) {
    std::cout << " " << qoct::format_double(kak.a_phases(j), 10);
  }
  std::cout << "\nwrote: " << out_dir << "/k1.txt, k2.txt, phases.csv\n";
  return 0;
}

int run_lie_rank(const CommonArgs& args) {
  const nlohmann::json config = qoct::load_json(args.config_path);
  const qoct::RunConfig rc = qoct::parse_run_config(config);
  const qoct::OperatorSet ops = qoct::build_operators(rc.model);
  const qoct::Matrix drift_h = ops.drift;
  const qoct::Matrix control_h = ops.control_generator();
  const qoct::LieClosure closure = qoct::lie_closure({drift_h, control_h});
  std::cout << "closure_dimension: " << closure.dimension << "\n";
  std::cout << "closure_truncated: " << (closure.truncated ? "true" : "false") << "\n";
  std::cout << "diagonal_reachability: " << qoct::diagonal_reachability(ops) << "\n";
  std::cout << "n_levels: " << rc.model.qudit.n_levels << "\n";
  return 0;
}

int run_simulate(const CommonArgs& args, const std::string& pulse_path) {
  const nlohmann::json config = qoct::load_json(args.config_path);
  const qoct::RunConfig rc = qoct::parse_run_config(config);
  const qoct::OperatorSet ops = qoct::build_operators(rc.model);
  const qoct::PiecewiseControl control = resolve_control(rc, pulse_path);
  const qoct::Channel channel = qoct::reduced_channel(ops, control, control.total_time);
  const double f_avg = qoct::average_fidelity(channel, rc.optimization.target);
  std::cout << "final_time_ns: " << qoct::format_double(control.total_time, 10) << "\n";
  std::cout << "average_fidelity: " << qoct::format_double(f_avg, 10) << "\n";
  std::cout << "error: " << qoct::format_double(1.0 - f_avg, 10) << "\n";
  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  const std::string path = args.out_dir + "/channel.txt";
  qoct::write_matrix(path, channel.data);
  std::cout << "wrote: " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and pulse optimization for an anharmonic qudit coupled to "
               "two-level defects and a Markovian bath"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("qoct ") + qoct::kVersion);

  CommonArgs opt_args, sweep_args, table_args, rand_args, nm_args, lie_args, sim_args;
  int n_targets = 20;
  std::string pulse_path, sim_pulse_path, matrix_path;
  std::string cartan_out = ".";
  int nm_samples = 400;

  CLI::App* c_opt = app.add_subcommand("optimize", "Optimize a pulse for the configured target");
  add_common(c_opt, opt_args);

  CLI::App* c_sweep = app.add_subcommand("sweep", "Grid scan over up to two config parameters");
  add_common(c_sweep, sweep_args);

  CLI::App* c_table = app.add_subcommand("table1", "Two-defect grid over detuning/coupling/T1");
  add_common(c_table, table_args);

  CLI::App* c_rand = app.add_subcommand("random-targets",
                                        "Batch optimization of random diagonal targets");
  add_common(c_rand, rand_args);
  c_rand->add_option("--n", n_targets, "Number of random targets")->check(CLI::PositiveNumber);

  CLI::App* c_nm = app.add_subcommand("nonmarkov", "Determinant trace of the reduced map");
  add_common(c_nm, nm_args);
  c_nm->add_option("--pulse", pulse_path, "Pulse CSV (t_ns,delta_mhz) to replay");
  c_nm->add_option("--samples", nm_samples, "Number of time samples")->check(CLI::PositiveNumber);

  CLI::App* c_cartan = app.add_subcommand("cartan", "KAK-decompose a unitary from a matrix file");
  c_cartan->add_option("--matrix", matrix_path, "Matrix file (see README for the format)")
      ->required();
  c_cartan->add_option("--out", cartan_out, "Output directory");

  CLI::App* c_lie = app.add_subcommand("lie-rank", "Dynamical-algebra dimension and "
                                                   "diagonal reachability for a model");
  add_common(c_lie, lie_args);

  CLI::App* c_sim = app.add_subcommand("simulate", "Propagate a pulse and report channel error");
  add_common(c_sim, sim_args);
  c_sim->add_option("--pulse", sim_pulse_path, "Pulse CSV (t_ns,delta_mhz) to replay");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_opt->parsed()) {
      const nlohmann::json config = qoct::load_json(opt_args.config_path);
      const qoct::OptimizationResult res =
          qoct::run_optimize(config, harness_options(opt_args));
      std::cout << "final_error: " << qoct::format_double(res.final_error, 10) << "\n";
      std::cout << "iterations: " << res.iterations << "\n";
      std::cout << "status: " << res.status << "\n";
      std::cout << "wrote: " << opt_args.out_dir
                << "/{pulse.csv,error_history.csv,determinant_trace.csv,summary.txt}\n";
      return 0;
    }
    if (c_sweep->parsed()) {
      const nlohmann::json config = qoct::load_json(sweep_args.config_path);
      const qoct::SweepResult res = qoct::run_sweep(config, harness_options(sweep_args));
      int failed = 0;
      for (const auto& row : res.rows) failed += row.status != "ok";
      std::cout << "points: " << res.rows.size() << " (failed: " << failed << ")\n";
      std::cout << "wrote: " << sweep_args.out_dir << "/sweep.csv\n";
      return 0;
    }
    if (c_table->parsed()) {
      const nlohmann::json config = qoct::load_json(table_args.config_path);
      const qoct::SweepResult res = qoct::run_table1(config, harness_options(table_args));
      std::cout << "points: " << res.rows.size() << "\n";
      for (const auto& row : res.rows) {
        std::cout << "delta2=" << row.axis_values[0] << " s2=" << row.axis_values[1]
                  << " t1_2=" << row.axis_values[2]
                  << " error=" << qoct::format_double(row.final_error, 6) << " (" << row.status
                  << ")\n";
      }
      std::cout << "wrote: " << table_args.out_dir << "/table1.csv\n";
      return 0;
    }
    if (c_rand->parsed()) {
      const nlohmann::json config = qoct::load_json(rand_args.config_path);
      const qoct::SweepResult res =
          qoct::run_random_targets(n_targets, config, harness_options(rand_args));
      std::cout << "points: " << res.rows.size() << "\n";
      std::cout << "wrote: " << rand_args.out_dir
                << "/{random_targets.csv,random_targets_summary.txt}\n";
      return 0;
    }
    if (c_nm->parsed()) return run_nonmarkov(nm_args, pulse_path, nm_samples);
    if (c_cartan->parsed()) return run_cartan(matrix_path, cartan_out);
    if (c_lie->parsed()) return run_lie_rank(lie_args);
    if (c_sim->parsed()) return run_simulate(sim_args, sim_pulse_path);
  } catch (const qoct::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
