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

#include <utility>
#include <vector>

#include "qoct/control.hpp"
#include "qoct/lindblad.hpp"
#include "qoct/model.hpp"

namespace qoct {

/// Fast propagation backend exploiting two structural facts about the models
/// produced by build_operators:
///
///  1. The generator L conserves q = excitation(row) - excitation(col), so
///     Liouville space block-diagonalizes into sectors of fixed q.
///  2. Nothing in L raises excitation. Channel computations start from
///     E_kl (x) |g...g>, whose row/col excitation is <= N-1, so all Liouville
///     coordinates with row or col excitation above N-1 stay exactly zero and
///     can be dropped.
///
/// Additionally, the sector at -q is the entrywise conjugate of the sector at
/// +q under the index swap (row,col) -> (col,row), so only q >= 0 sectors are
/// propagated; -q results are filled in by conjugation.
class SectorEngine {
 public:
  explicit SectorEngine(const OperatorSet& ops);

  int system_dim() const { return n_; }
  double max_abs_generator() const;  ///< max over sectors of ||base block||_inf

  /// Reduced channel at time t in [0, T].
  Channel channel(const PiecewiseControl& control, double t) const;

  /// Reduced channels at several (sorted, in [0, T]) sample times; one pass.
  std::vector<Channel> channel_samples(const PiecewiseControl& control,
                                       const RealVector& times) const;

  /// 1 - F_avg against `target` at the final time.
  double objective(const PiecewiseControl& control, const Matrix& target) const;

  /// Objective and its exact derivative with respect to every slice value
  /// (no ramp masking here; constraint handling lives in the optimizer).
  std::pair<double, RealVector> objective_gradient(const PiecewiseControl& control,
                                                   const Matrix& target) const;

 private:
  struct Sector {
    int q = 0;
    int size = 0;
    std::vector<int> rows, cols;          // basis indices of each coordinate
    Matrix base;                          // drift + dissipator block
    Vector ctrl;                          // diagonal control-generator block
    // Channel plumbing: initial unit coordinates and trace-readout scatter.
    std::vector<std::pair<int, int>> init;     // (coordinate, channel column)
    std::vector<std::pair<int, int>> extract;  // (coordinate, channel row)
  };

  // Per-sector initial column stack (size x #columns of this sector).
  std::vector<Matrix> initial_columns() const;
  // Scatter per-sector state stacks into the full channel matrix.
  void fill_channel(const std::vector<Matrix>& states, Matrix& lambda) const;
  // Readout stack W with W(:,m) sampling vec(U E U^dag) at extract rows.
  std::vector<Matrix> readout_columns(const Matrix& target) const;

  int n_ = 0;    // qudit dimension N
  int env_ = 0;  // defect factor dimension 2^k
  int d_ = 0;    // joint dimension
  std::vector<Sector> sectors_;                  // q >= 0 only
  std::vector<std::vector<int>> sector_col_of_;  // sector -> its channel columns
};

}  // namespace qoct
