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

#include <optional>

#include "qoct/model.hpp"

namespace qoct {

/// Forced linear rise/fall of the control at the pulse edges.
struct RampSpec {
  double ramp_time = 2.5;                     ///< ns of ramp at each end.
  double ramp_rate_cap = kTwoPi * 0.5 / 2.5;  ///< max |d delta / dt| [rad/ns per ns].
  bool endpoints_zero = true;                 ///< ramp from/to exactly zero.

  /// Number of slices locked by one ramp on a grid with slice duration dt.
  int locked_slices(double dt) const {
    if (!endpoints_zero || ramp_time <= 0.0) return 0;
    return static_cast<int>(std::llround(ramp_time / dt));
  }
};

/// Piecewise-constant level-shift control delta(t) [rad/ns]: value j applies
/// on [j*dt, (j+1)*dt) with dt = total_time / n_slices.
struct PiecewiseControl {
  double total_time = 0.0;        ///< T [ns].
  int n_slices = 0;               ///< >= 1.
  RealVector values;              ///< length n_slices, delta_j [rad/ns].
  std::optional<RampSpec> ramp;   ///< edge-ramp constraint, if any.

  double dt() const { return total_time / n_slices; }
};

}  // namespace qoct
