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

#include "qoct/model.hpp"

namespace qoct {

/// Dynamic Lie algebra spanned by nested commutators of the generators.
struct LieClosure {
  std::vector<Matrix> basis;  ///< anti-Hermitian, Hilbert-Schmidt orthonormal
  int dimension = 0;
  bool truncated = false;     ///< hit the max_dim cap before closing
};

/// Closure of {i g : g in generators} under commutators. Generators must be
/// Hermitian and of equal dimension. New directions are admitted when their
/// residual after projection onto the current span exceeds tol (relative to
/// the commutator norm).
LieClosure lie_closure(const std::vector<Matrix>& generators, double tol = 1e-8,
                       int max_dim = 0);

/// Number of independent traceless-diagonal qudit directions the control can
/// steer: the smallest ideal of the {drift, D} closure containing the control
/// generator D, projected onto traceless diagonals of the qudit factor within
/// the all-defects-ground block. N-1 signals full diagonal-unitary
/// controllability. Throws std::runtime_error if the closure truncates before
/// the rank is decided.
int diagonal_reachability(const OperatorSet& ops);

}  // namespace qoct
