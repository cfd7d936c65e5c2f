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

#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace qoct {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Anharmonic N-level system (truncated transmon-style ladder).
/// All frequencies are angular [rad/ns]; all times are [ns].
struct QuditSpec {
  int n_levels = 4;               ///< N >= 2.
  double base_frequency = 0.0;    ///< omega_Q; removed by the rotating frame.
  double anharmonicity = 0.0;     ///< beta; level n sits at n*omega_Q + beta*n*(n+1)/2.
  double t1 = kInf;               ///< amplitude-damping lifetime, > 0 or infinite.
  std::optional<double> t2_star;  ///< optional pure-dephasing time, > 0.
};

/// One strongly coupled two-level defect exchanging excitations with the
/// qudit ladder through (coupling/2) * (a sigma^+ + a^dag sigma^-).
struct TlsSpec {
  double detuning = 0.0;          ///< Delta_i = omega_Q - omega_i (positive: defect below qudit).
  double coupling = 0.0;          ///< S_i >= 0.
  double t1 = kInf;               ///< defect amplitude-damping lifetime, > 0 or infinite.
  std::optional<double> t2_star;  ///< optional pure-dephasing time, > 0.
};

/// Declares how frequency-like values in config files (given in MHz) map to
/// the internal angular units [rad/ns].
enum class FrequencyConvention {
  ordinary,  ///< config value nu in MHz -> omega = 2*pi*1e-3*nu rad/ns (default)
  angular,   ///< config value is already angular, in rad/us -> omega = 1e-3*value rad/ns
};

/// Full system declaration: one qudit plus an ordered list of defects.
/// The joint Hilbert space is ordered qudit (slowest index) x TLS_1 x ... x
/// TLS_k (fastest index); dimension N * 2^k.
struct ModelSpec {
  QuditSpec qudit;
  std::vector<TlsSpec> tls;
  FrequencyConvention frequency_convention = FrequencyConvention::ordinary;

  int n_tls() const { return static_cast<int>(tls.size()); }
  int env_dim() const { return 1 << tls.size(); }
  int dim() const { return qudit.n_levels * env_dim(); }
};

/// Rotating-frame operators generated from a ModelSpec.
///
/// The frame rotates at omega_Q per excitation quantum, which removes the
/// qudit base frequency, turns each defect term into -Delta_i sigma^+sigma^-,
/// and leaves both the exchange coupling and the dissipator form-invariant.
struct OperatorSet {
  ModelSpec model;                   ///< spec the operators were built from
  Matrix drift;                      ///< time-independent H_0 [rad/ns]
  RealVector control_diag;           ///< diagonal of the control generator D = n (x) I
  std::vector<Matrix> collapse_ops;  ///< Lindblad collapse operators [1/sqrt(ns)]
  Eigen::VectorXi excitation;        ///< total excitation count of each basis state

  int dim() const { return static_cast<int>(drift.rows()); }
  /// D as a dense matrix; H(t) = drift + delta(t) * D with delta in rad/ns.
  Matrix control_generator() const;
  /// N_tot as a dense matrix (diagonal of `excitation`).
  Matrix excitation_number() const;
};

/// Lowering operator of the truncated ladder, <n-1|a|n> = sqrt(n).
Matrix lowering_operator(int n_levels);

/// Builds drift, control generator and collapse operators in the rotating
/// frame. Throws std::invalid_argument for non-finite parameters, n_levels
/// < 2, or non-positive lifetimes.
OperatorSet build_operators(const ModelSpec& model);

/// True iff [drift, N_tot] and [D, N_tot] vanish to `tol` and every collapse
/// operator maps the excitation-k subspace into the excitation-(k-1) subspace.
bool validate_excitation_conservation(const OperatorSet& ops, double tol = 1e-12);

}  // namespace qoct
