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

#include <vector>

#include "qoct/control.hpp"
#include "qoct/model.hpp"

namespace qoct {

/// Density matrix of dimension `dim`. Column-stacking vectorization is used
/// throughout: vec(rho) index = col * dim + row.
struct DensityMatrix {
  int dim = 0;
  Matrix data;

  static DensityMatrix from(const Matrix& m) {
    return DensityMatrix{static_cast<int>(m.rows()), m};
  }
};

/// Linear map on column-vectorized density matrices (d^2 x d^2).
struct Superoperator {
  int dim = 0;   ///< Hilbert-space dimension d.
  Matrix data;   ///< d^2 x d^2.
};

/// Reduced dynamical map on the qudit alone (N^2 x N^2), in the same
/// column-stacking vectorization basis.
struct Channel {
  int system_dim = 0;  ///< N.
  Matrix data;         ///< N^2 x N^2.
};

/// Generator of the master equation in vectorized form:
///   L = -i(I (x) H - H^T (x) I)
///       + sum_k [conj(A_k) (x) A_k - 1/2 I (x) A_k^dag A_k - 1/2 (A_k^dag A_k)^T (x) I].
/// Throws std::invalid_argument on dimension mismatch.
Superoperator liouvillian(const Matrix& hamiltonian, const std::vector<Matrix>& collapse_ops);

/// exp(L * dt) by scaling-and-squaring. Throws on non-finite entries or dt <= 0.
Superoperator propagate_slice(const Superoperator& liou, double dt);

/// Ordered product G = exp(L_n dt) ... exp(L_1 dt) over the whole control,
/// with L_j built from H_0 + delta_j * D and the model's collapse operators.
Superoperator propagator(const OperatorSet& ops, const PiecewiseControl& control);

/// Applies a superoperator to a density matrix.
DensityMatrix apply_superoperator(const Superoperator& s, const DensityMatrix& rho);

/// Reduced qudit channel at time t in [0, total_time]: every qudit basis
/// matrix E_kl is embedded as E_kl (x) |g...g><g...g|, propagated to t, and
/// traced over the defect factor. Exact for the excitation-conserving models
/// produced by build_operators (fast block-diagonal path inside).
Channel reduced_channel(const OperatorSet& ops, const PiecewiseControl& control, double t);

/// Average gate fidelity of a trace-preserving channel against a target
/// unitary: F_pro = (1/N^2) sum_kl Re <vec(U E_kl U^dag), Lambda vec(E_kl)>,
/// F_avg = (N F_pro + 1)/(N + 1). Global-phase insensitive.
/// Throws std::invalid_argument if target is not unitary to 1e-10.
double average_fidelity(const Channel& ch, const Matrix& target);

/// Partial trace over the defect factor; preserves the trace exactly.
DensityMatrix partial_trace_env(const DensityMatrix& rho, const ModelSpec& model);

/// Choi matrix C = sum_kl |k><l| (x) Lambda(|k><l|); positive semidefinite
/// iff the channel is completely positive. Used by tests and diagnostics.
Matrix choi_matrix(const Channel& ch);

}  // namespace qoct
