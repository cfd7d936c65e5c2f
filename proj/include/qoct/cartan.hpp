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

#include "qoct/model.hpp"

namespace qoct {

/// U = k1 * diag(e^{i a_phases}) * k2 with k1, k2 in SO(N).
struct KakDecomposition {
  RealMatrix k1;
  RealMatrix k2;
  RealVector a_phases;       ///< phases of the diagonal factor A, in (-pi, pi]
  double residual = 0.0;     ///< ||k1 A k2 - U||_F
  double global_phase = 0.0; ///< leftover phase factor (0 for this construction)

  Matrix reconstruct() const;
};

/// Decomposes a unitary U into orthogonal-diagonal-orthogonal factors via the
/// symmetric unitary M = U U^T: M = X + iY with X, Y real symmetric and
/// commuting; a joint eigenbasis O (randomized mixing handles degenerate
/// spectra) yields A from the eigenphase halves, k1 = O, k2 = A^{-1} k1^T U.
/// Throws std::invalid_argument for non-unitary input and std::runtime_error
/// if the residual tolerance cannot be met after degeneracy retries.
KakDecomposition kak_decompose(const Matrix& u);

/// True iff ||M^T M - I|| <= tol and |det M - 1| <= tol.
bool is_special_orthogonal(const RealMatrix& m, double tol);

}  // namespace qoct
