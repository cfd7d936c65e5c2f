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
#include "qoct/model.hpp"

namespace qoct {

/// |det Lambda(t)| of the reduced map over time. Any increase of the
/// determinant magnitude witnesses non-Markovian (information back-flow)
/// dynamics; Markovian semigroups shrink the volume monotonically.
struct DeterminantTrace {
  RealVector times;                                       ///< [ns]
  RealVector det_abs;                                     ///< |det Lambda(t_m)|
  std::vector<std::pair<double, double>> nonmarkovian_intervals;
};

/// Samples |det| of the reduced channel on n_samples equispaced times over
/// [0, total_time]; forward differences exceeding +epsilon are flagged and
/// merged into non-Markovian intervals.
DeterminantTrace determinant_trace(const OperatorSet& ops, const PiecewiseControl& control,
                                   int n_samples = 400, double epsilon = 1e-9);

/// True iff the trace has no interval of determinant increase.
bool is_markovian(const DeterminantTrace& trace);

}  // namespace qoct
