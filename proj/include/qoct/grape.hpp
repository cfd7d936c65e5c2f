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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qoct/control.hpp"
#include "qoct/model.hpp"

namespace qoct {

enum class OptimizerKind {
  lbfgs,                            ///< projected L-BFGS with Armijo backtracking (default)
  gradient_descent_backtracking,    ///< projected steepest descent
};

/// Settings for a pulse optimization. Frequencies in rad/ns, times in ns.
struct OptimizationConfig {
  Matrix target;                    ///< N x N unitary; diagonal unless overridden.
  bool allow_nondiagonal_target = false;
  double total_time = 40.0;         ///< pulse duration T [ns].
  int n_slices = 0;                 ///< 0 -> default 10 slices per ns.
  int max_iterations = 300;
  double convergence_tol = 1e-9;    ///< stop when the error change drops below this.
  double amplitude_bound = kTwoPi;  ///< |delta| <= delta_max [rad/ns].
  std::uint64_t seed = 0;           ///< initial-guess randomization.
  OptimizerKind optimizer = OptimizerKind::lbfgs;
  int n_starts = 5;                 ///< independent random starts; best kept.
  double stop_below_error = 0.0;    ///< early exit once the error falls below this.
  std::optional<RealVector> initial_control;  ///< start 0 warm start (full slice values).
};

struct OptimizationResult {
  PiecewiseControl best_control;
  std::vector<double> error_history;  ///< accepted iterates of the winning start.
  double final_error = 1.0;
  double gradient_norm_final = 0.0;
  double wall_time = 0.0;             ///< seconds.
  int iterations = 0;                 ///< accepted iterations of the winning start.
  int best_start = 0;
  bool converged = false;
  std::string status;
};

/// 1 - F_avg of the realized channel against the target at the final time.
double objective(const OperatorSet& ops, const PiecewiseControl& control, const Matrix& target);

/// Exact derivative of the objective with respect to each slice value,
/// with components of ramp-locked slices projected to zero.
RealVector gradient(const OperatorSet& ops, const PiecewiseControl& control, const Matrix& target);

/// Enforces edge ramps and the amplitude bound: boundary slices are rewritten
/// as linear ramps from/to zero whose endpoint matches the adjacent free value
/// (rate-capped), interior slices are clipped to [-delta_max, delta_max].
/// Throws std::invalid_argument if 2 * ramp_time >= total_time.
PiecewiseControl apply_constraints(const PiecewiseControl& control, const RampSpec& ramp,
                                   double delta_max);

/// Multi-start gradient optimization of the control toward the target.
/// Deterministic for a fixed config (seeds derived per start).
OptimizationResult optimize(const OperatorSet& ops, const OptimizationConfig& config,
                            const std::optional<RampSpec>& ramp);

/// diag(e^{i phi_0}, ..., e^{i phi_{n-1}}) with phases uniform in [0, 2 pi),
/// reproducible from the seed.
Matrix random_diagonal_target(int n, std::uint64_t seed);

}  // namespace qoct
