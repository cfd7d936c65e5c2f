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
//
// End-to-end acceptance battery. Each criterion prints exactly one
// "PASS criterion N: ..." or "FAIL criterion N: ..." line; the exit code is
// the number of failed criteria. Run with no arguments for all criteria or
// pass criterion numbers to run a subset.
//
// Expensive artifacts (the fully converged single-defect pulse of criterion 3)
// are cached under acceptance_cache/ in the working directory and reused by
// criteria 6, 7, 10, and 11.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qoct/cartan.hpp"
#include "qoct/config.hpp"
#include "qoct/grape.hpp"
#include "qoct/io.hpp"
#include "qoct/liealg.hpp"
#include "qoct/lindblad.hpp"
#include "qoct/model.hpp"
#include "qoct/nonmarkov.hpp"
#include "qoct/rng.hpp"
#include "qoct/sector_engine.hpp"
#include "qoct/sweep.hpp"

using namespace qoct;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Shared reference scenario: 4-level qudit, 40 MHz anharmonicity, one defect
// 550 MHz below the base transition with 60 MHz coupling; T = 40 ns gate with
// 2.5 ns boundary ramps; |delta| <= 1000 MHz. 0.2 ns slices keep the full
// battery tractable on one core (any piecewise-constant optimum on this grid
// is also admissible on finer grids).
// ---------------------------------------------------------------------------

constexpr double kGateTime = 40.0;
constexpr int kSlices = 200;
constexpr int kC3Starts = 5;
constexpr int kC3MaxIter = 300;
constexpr std::uint64_t kC3Seed = 1;
const char* kCacheDir = "acceptance_cache";

ModelSpec reference_model(double qudit_t1 = 5000.0, double tls_t1 = 1000.0,
                          double coupling_mhz = 60.0) {
  ModelSpec model;
  model.qudit.n_levels = 4;
  model.qudit.anharmonicity = kTwoPi * 40e-3;
  model.qudit.t1 = qudit_t1;
  TlsSpec tls;
  tls.detuning = kTwoPi * 550e-3;
  tls.coupling = kTwoPi * coupling_mhz * 1e-3;
  tls.t1 = tls_t1;
  model.tls.push_back(tls);
  return model;
}

Matrix u1_target() {
  Matrix u = Matrix::Identity(4, 4);
  u(1, 1) = -1.0;
  return u;
}

RampSpec default_ramp() {
  return RampSpec{};  // 2.5 ns, +/-500 MHz over 2.5 ns rate cap, zero endpoints
}

OptimizationConfig base_config() {
  OptimizationConfig config;
  config.target = u1_target();
  config.total_time = kGateTime;
  config.n_slices = kSlices;
  config.max_iterations = kC3MaxIter;
  config.n_starts = kC3Starts;
  config.seed = kC3Seed;
  return config;
}

json reference_model_json(double qudit_t1, double tls_t1) {
  return json{{"qudit", {{"n_levels", 4}, {"anharmonicity_mhz", 40.0}, {"t1_ns", qudit_t1}}},
              {"tls", json::array({{{"detuning_mhz", 550.0},
                                    {"coupling_mhz", 60.0},
                                    {"t1_ns", tls_t1}}})}};
}

std::string fmt(double v, const char* spec = "%.3e") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct Verdict {
  bool pass = false;
  std::string detail;
};

// --------------------------- criterion 3 cache -----------------------------

struct ReferencePulse {
  RealVector values;  // rad/ns on the 200-slice grid
  double error = 1.0;
};

std::optional<ReferencePulse> load_reference_pulse() {
  const std::string control_path = std::string(kCacheDir) + "/c3_control.txt";
  const std::string meta_path = std::string(kCacheDir) + "/c3_error.txt";
  if (!std::filesystem::exists(control_path) || !std::filesystem::exists(meta_path)) {
    return std::nullopt;
  }
  ReferencePulse pulse;
  const Matrix m = read_matrix(control_path);
  pulse.values = m.col(0).real();
  std::ifstream meta(meta_path);
  meta >> pulse.error;
  if (!meta || pulse.values.size() != kSlices) return std::nullopt;
  return pulse;
}

ReferencePulse compute_reference_pulse() {
  const OperatorSet ops = build_operators(reference_model());
  const OptimizationResult result = optimize(ops, base_config(), default_ramp());
  ReferencePulse pulse;
  pulse.values = result.best_control.values;
  pulse.error = result.final_error;
  std::error_code ec;
  std::filesystem::create_directories(kCacheDir, ec);
  write_matrix(std::string(kCacheDir) + "/c3_control.txt",
               Matrix(pulse.values.cast<Complex>()));
  std::ofstream meta(std::string(kCacheDir) + "/c3_error.txt");
  meta.precision(17);
  meta << pulse.error << "\n";
  return pulse;
}

ReferencePulse ensure_reference_pulse() {
  if (auto cached = load_reference_pulse()) return *cached;
  return compute_reference_pulse();
}

PiecewiseControl reference_control(const RealVector& values) {
  PiecewiseControl control;
  control.total_time = kGateTime;
  control.n_slices = kSlices;
  control.ramp = default_ramp();
  control.values = values;
  return control;
}

std::vector<double> to_mhz(const RealVector& values) {
  std::vector<double> out(values.size());
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    out[j] = freq_to_config(values(j), FrequencyConvention::ordinary);
  }
  return out;
}

// ------------------------------ criteria -----------------------------------

Verdict criterion_1() {
  Timer timer;
  const double t1 = 100.0;
  ModelSpec model;
  model.qudit.n_levels = 2;
  model.qudit.anharmonicity = 0.0;
  model.qudit.t1 = t1;
  const OperatorSet ops = build_operators(model);
  const Superoperator gen = liouvillian(ops.drift, ops.collapse_ops);

  double worst_rho = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double t = 3.0 * t1 * k / 60.0;
    const Superoperator p = propagate_slice(gen, t);
    Vector rho0 = Vector::Zero(4);
    rho0(3) = 1.0;  // |1><1|
    const Vector rho = p.data * rho0;
    worst_rho = std::max(worst_rho, std::abs(rho(3).real() - std::exp(-t / t1)));
  }

  PiecewiseControl control;
  control.total_time = 3.0 * t1;
  control.n_slices = 30;
  control.values = RealVector::Zero(30);
  const DeterminantTrace trace = determinant_trace(ops, control, 61);
  double worst_det = 0.0;
  for (Eigen::Index m = 0; m < trace.times.size(); ++m) {
    worst_det = std::max(
        worst_det, std::abs(trace.det_abs(m) - std::exp(-2.0 * trace.times(m) / t1)));
  }

  const double elapsed = timer.seconds();
  const bool pass = worst_rho <= 1e-8 && worst_det <= 1e-8 && elapsed < 1.0;
  return {pass, "amplitude-damping analytics: max |rho11 - exp(-t/T1)| = " + fmt(worst_rho) +
                    ", max |det - exp(-2t/T1)| = " + fmt(worst_det) + ", t = " +
                    fmt(elapsed, "%.2f") + " s (limits 1e-8, 1e-8, 1 s)"};
}

Verdict criterion_2() {
  Timer timer;
  const OperatorSet ops = build_operators(reference_model());
  const Matrix target = u1_target();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-kTwoPi * 0.25, kTwoPi * 0.25);
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    PiecewiseControl control;
    control.total_time = kGateTime;
    control.n_slices = 80;
    control.values = RealVector::Zero(80);
    for (int j = 0; j < 80; ++j) control.values(j) = uni(rng);
    const RealVector grad = gradient(ops, control, target);
    RealVector fd = RealVector::Zero(80);
    for (int j = 0; j < 80; ++j) {
      PiecewiseControl plus = control, minus = control;
      plus.values(j) += h;
      minus.values(j) -= h;
      fd(j) = (objective(ops, plus, target) - objective(ops, minus, target)) / (2.0 * h);
    }
    worst = std::max(worst, (grad - fd).norm() / fd.norm());
  }
  const double elapsed = timer.seconds();
  const bool pass = worst <= 1e-4 && elapsed < 60.0;
  return {pass, "gradient vs central differences on 10 random controls: worst relative "
                "deviation = " + fmt(worst) + ", t = " + fmt(elapsed, "%.1f") +
                " s (limits 1e-4, 60 s)"};
}

Verdict criterion_3() {
  Timer timer;
  const ReferencePulse pulse = compute_reference_pulse();
  const double elapsed = timer.seconds();
  const bool pass = pulse.error <= 3.3e-2;
  return {pass, "diag(1,-1,1,1) on the single-defect model (T1 = 5 us / 1 us, 2.5 ns ramps): "
                "final error = " + fmt(pulse.error) + " (limit 3.3e-2), " +
                std::to_string(kC3Starts) + " starts x " + std::to_string(kC3MaxIter) +
                " iterations, t = " + fmt(elapsed, "%.0f") + " s"};
}

Verdict criterion_4() {
  Timer timer;
  // Decoupled defect: the only reachable qudit evolutions are generated by the
  // commuting pair {anharmonic diagonal, number operator}, so the coherent
  // part depends on the accumulated drive phase alone. Two independent
  // probes: (a) >= 20 optimizer starts, (b) a dense scan over the accumulated
  // phase using constant-amplitude ramped pulses.
  const OperatorSet ops = build_operators(reference_model(5000.0, 1000.0, 0.0));

  OptimizationConfig config = base_config();
  config.n_starts = 20;
  const OptimizationResult opt = optimize(ops, config, default_ramp());

  const RampSpec ramp = default_ramp();
  PiecewiseControl probe;
  probe.total_time = kGateTime;
  probe.n_slices = kSlices;
  probe.ramp = ramp;
  const double dt = kGateTime / kSlices;
  const int locked = ramp.locked_slices(dt);
  // One full period of the accumulated phase: phi = delta * (T - r * dt).
  const double period = kTwoPi / (kGateTime - locked * dt);
  double scan_best = 1.0;
  double scan_best_delta = 0.0;
  const int n_scan = 2400;
  for (int k = 0; k < n_scan; ++k) {
    const double delta = period * k / n_scan;
    probe.values = RealVector::Constant(kSlices, delta);
    const PiecewiseControl shaped = apply_constraints(probe, ramp, config.amplitude_bound);
    const double err = objective(ops, shaped, config.target);
    if (err < scan_best) {
      scan_best = err;
      scan_best_delta = delta;
    }
  }

  const double floor_err = std::min(opt.final_error, scan_best);
  const double elapsed = timer.seconds();
  const bool pass = floor_err >= 0.40;
  return {pass, "decoupled-defect floor: best of 20 starts = " + fmt(opt.final_error) +
                    ", best of " + std::to_string(n_scan) + "-point constant-drive scan = " +
                    fmt(scan_best) + " (at delta = " + fmt(scan_best_delta, "%.4f") +
                    " rad/ns); measured floor " + fmt(floor_err) +
                    " vs required >= 0.40, t = " + fmt(elapsed, "%.0f") + " s"};
}

Verdict criterion_5() {
  Timer timer;
  const OperatorSet ops = build_operators(reference_model(kInf, kInf));
  OptimizationConfig config = base_config();
  config.stop_below_error = 9e-4;
  config.seed = 5;
  const OptimizationResult result = optimize(ops, config, default_ramp());
  const double elapsed = timer.seconds();
  const bool pass = result.final_error <= 1e-3;
  return {pass, "dissipation-free control: final error = " + fmt(result.final_error) +
                    " (limit 1e-3), status " + result.status + ", t = " +
                    fmt(elapsed, "%.0f") + " s"};
}

Verdict criterion_6() {
  Timer timer;
  const ReferencePulse reference = ensure_reference_pulse();

  json config;
  config["model"] = reference_model_json(5000.0, 1000.0);
  config["control"] = {{"total_time_ns", kGateTime},
                       {"n_slices", kSlices},
                       {"ramp", json::object()}};
  config["optimization"] = {{"max_iterations", 150},
                            {"n_starts", 2},
                            {"seed", 6},
                            {"stop_below_error", 2.4e-2},
                            {"initial_control", to_mhz(reference.values)}};
  config["table1"] = {{"warm_start", false}};

  HarnessOptions options;
  options.out_dir = std::string(kCacheDir) + "/table1";
  const SweepResult table = run_table1(config, options);

  double worst_450 = 0.0;
  double err_50_40_2000 = -1.0, err_50_40_40 = -1.0;
  bool all_ok = true;
  for (const SweepRow& row : table.rows) {
    all_ok = all_ok && row.status == "ok";
    const double d2 = row.axis_values[0], s2 = row.axis_values[1], t12 = row.axis_values[2];
    if (d2 == 450.0) worst_450 = std::max(worst_450, row.final_error);
    if (d2 == 50.0 && s2 == 40.0 && t12 == 2000.0) err_50_40_2000 = row.final_error;
    if (d2 == 50.0 && s2 == 40.0 && t12 == 40.0) err_50_40_40 = row.final_error;
  }
  const double elapsed = timer.seconds();
  const bool pass = all_ok && worst_450 <= 2.0 * 1.652e-2 && err_50_40_40 > err_50_40_2000;
  return {pass, "two-defect grid: worst distant-defect row = " + fmt(worst_450) +
                    " (limit 3.304e-2); close defect at S2 = 40 MHz: error(T1 = 40 ns) = " +
                    fmt(err_50_40_40) + " > error(T1 = 2000 ns) = " + fmt(err_50_40_2000) +
                    " required, t = " + fmt(elapsed, "%.0f") + " s"};
}

Verdict criterion_7() {
  Timer timer;
  const ReferencePulse reference = ensure_reference_pulse();
  const PiecewiseControl control = reference_control(reference.values);

  const OperatorSet coupled = build_operators(reference_model());
  const DeterminantTrace with_defect = determinant_trace(coupled, control, 400);

  const OperatorSet decoupled = build_operators(reference_model(5000.0, 1000.0, 0.0));
  const DeterminantTrace without = determinant_trace(decoupled, control, 400);

  const double elapsed = timer.seconds();
  const bool pass = with_defect.nonmarkovian_intervals.size() >= 1 &&
                    without.nonmarkovian_intervals.empty();
  return {pass, "determinant witness on the optimized pulse: coupled model has " +
                    std::to_string(with_defect.nonmarkovian_intervals.size()) +
                    " backflow interval(s) (>= 1 required), decoupled model has " +
                    std::to_string(without.nonmarkovian_intervals.size()) +
                    " (0 required), t = " + fmt(elapsed, "%.0f") + " s"};
}

Verdict criterion_8() {
  Timer timer;
  std::mt19937_64 rng(2025);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto haar = [&](int n) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
    return q;
  };
  auto special_orthogonal = [&](int n) {
    RealMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = gauss(rng);
    Eigen::HouseholderQR<RealMatrix> qr(a);
    RealMatrix q = qr.householderQ();
    const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
      if (r(j, j) < 0) q.col(j) *= -1.0;
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
  };

  double worst_residual = 0.0;
  bool factors_ok = true;
  int checked = 0;

  auto check = [&](const Matrix& u) {
    const KakDecomposition kak = kak_decompose(u);
    worst_residual = std::max(worst_residual, (kak.reconstruct() - u).norm());
    factors_ok = factors_ok && is_special_orthogonal(kak.k1, 1e-10) &&
                 is_special_orthogonal(kak.k2, 1e-10);
    ++checked;
  };

  for (int trial = 0; trial < 1000; ++trial) check(haar(4));

  // Engineered degenerate spectra of U U^T.
  const std::vector<RealVector> degenerate = {
      (RealVector(4) << 0.7, 0.7, -1.1, -1.1).finished(),
      (RealVector(4) << 0.4, 0.4, 0.4, -2.2).finished(),
      RealVector::Constant(4, 1.3),
      (RealVector(4) << kTwoPi / 2 - 1e-4, -kTwoPi / 2 + 1e-4, 0.2, 0.2).finished(),
  };
  for (const RealVector& phases : degenerate) {
    Vector diag(4);
    for (int j = 0; j < 4; ++j) diag(j) = std::exp(Complex(0, 1) * phases(j));
    const Matrix u = special_orthogonal(4).cast<Complex>() * diag.asDiagonal() *
                     special_orthogonal(4).cast<Complex>();
    check(u);
  }

  const double elapsed = timer.seconds();
  const bool pass = worst_residual <= 1e-9 && factors_ok && elapsed < 10.0;
  return {pass, "KAK battery over " + std::to_string(checked) +
                    " unitaries (Haar + degenerate): worst residual = " + fmt(worst_residual) +
                    " (limit 1e-9), orthogonal factors at 1e-10: " +
                    (factors_ok ? "yes" : "NO") + ", t = " + fmt(elapsed, "%.1f") +
                    " s (limit 10 s)"};
}

Verdict criterion_9() {
  Timer timer;
  ModelSpec bare;
  bare.qudit.n_levels = 4;
  bare.qudit.anharmonicity = kTwoPi * 40e-3;
  const int rank_bare = diagonal_reachability(build_operators(bare));
  const int rank_defect = diagonal_reachability(build_operators(reference_model()));
  const double elapsed = timer.seconds();
  const bool pass = rank_bare == 1 && rank_defect == 3 && elapsed < 60.0;
  return {pass, "diagonal reachability: bare qudit = " + std::to_string(rank_bare) +
                    " (1 required), with the defect = " + std::to_string(rank_defect) +
                    " (N-1 = 3 required), t = " + fmt(elapsed, "%.1f") + " s (limit 60 s)"};
}

Verdict criterion_10() {
  Timer timer;
  const ReferencePulse reference = ensure_reference_pulse();
  const OperatorSet ops = build_operators(reference_model());

  std::vector<double> errors;
  std::string listing;
  for (int i = 0; i < 20; ++i) {
    OptimizationConfig config = base_config();
    config.target = random_diagonal_target(4, derive_point_seed(1010, i + 1));
    config.n_starts = 4;
    config.max_iterations = 400;
    config.seed = derive_point_seed(2020, i);
    config.initial_control = reference.values;
    const OptimizationResult result = optimize(ops, config, default_ramp());
    errors.push_back(result.final_error);
    listing += (listing.empty() ? "" : " ") + fmt(result.final_error);
  }
  const double lo = *std::min_element(errors.begin(), errors.end());
  const double hi = *std::max_element(errors.begin(), errors.end());
  const double elapsed = timer.seconds();
  const bool pass = hi / lo <= 1.5 && hi <= 1.5 * reference.error;
  return {pass, "20 random diagonal targets: errors in [" + fmt(lo) + ", " + fmt(hi) +
                    "], spread = " + fmt(hi / lo, "%.3f") + " (limit 1.5), max / reference = " +
                    fmt(hi / reference.error, "%.3f") + " (limit 1.5), per-target [" + listing +
                    "], t = " + fmt(elapsed, "%.0f") + " s"};
}

Verdict criterion_11() {
  Timer timer;
  const ReferencePulse reference = ensure_reference_pulse();

  json config;
  config["model"] = reference_model_json(5000.0, 1000.0);
  config["control"] = {{"total_time_ns", kGateTime},
                       {"n_slices", kSlices},
                       {"ramp", json::object()}};
  config["optimization"] = {{"max_iterations", kC3MaxIter},
                            {"n_starts", 2},
                            {"seed", 11},
                            {"initial_control", to_mhz(reference.values)}};
  config["sweep"] = {
      {"axes",
       json::array({{{"path", "/model/qudit/t1_ns"},
                     {"values", json::array({500.0, 2000.0, 5000.0})}},
                    {{"path", "/model/tls/0/t1_ns"},
                     {"values", json::array({200.0, 1000.0, 5000.0})}}})}};

  HarnessOptions options;
  options.out_dir = std::string(kCacheDir) + "/grid3x3";
  const SweepResult sweep = run_sweep(config, options);

  double err[3][3];
  bool all_ok = sweep.rows.size() == 9;
  for (const SweepRow& row : sweep.rows) {
    all_ok = all_ok && row.status == "ok";
    if (row.status == "ok") err[row.grid_index[0]][row.grid_index[1]] = row.final_error;
  }
  bool monotone = true;
  if (all_ok) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i + 1 < 3) monotone = monotone && err[i + 1][j] <= 1.2 * err[i][j];
        if (j + 1 < 3) monotone = monotone && err[i][j + 1] <= 1.2 * err[i][j];
      }
    }
  }
  const double best = all_ok ? err[2][2] : 1.0;
  const double elapsed = timer.seconds();
  const bool pass = all_ok && monotone && best < 1e-2;
  std::string grid;
  if (all_ok) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) grid += (grid.empty() ? "" : " ") + fmt(err[i][j]);
  }
  return {pass, "3x3 lifetime grid: errors [" + grid + "], non-increasing along both axes "
                "within 20%: " + (monotone ? "yes" : "NO") + ", best cell = " + fmt(best) +
                    " (limit 1e-2), t = " + fmt(elapsed, "%.0f") + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
      criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};

  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) {
    const int n = std::atoi(argv[a]);
    if (n < 1 || n > 11) {
      std::cerr << "usage: acceptance [criterion numbers 1..11]\n";
      return 64;
    }
    selected.push_back(n);
  }
  if (selected.empty()) {
    for (int n = 1; n <= 11; ++n) selected.push_back(n);
  }

  int failures = 0;
  for (int n : selected) {
    Verdict verdict;
    try {
      verdict = criteria[n - 1]();
    } catch (const std::exception& e) {
      verdict = {false, std::string("unexpected exception: ") + e.what()};
    }
    std::cout << (verdict.pass ? "PASS" : "FAIL") << " criterion " << n << ": "
              << verdict.detail << std::endl;
    failures += verdict.pass ? 0 : 1;
  }
  return failures;
}
