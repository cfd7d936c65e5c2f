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

#include "qoct/nonmarkov.hpp"

#include <stdexcept>

#include "qoct/sector_engine.hpp"

namespace qoct {

DeterminantTrace determinant_trace(const OperatorSet& ops, const PiecewiseControl& control,
                                   int n_samples, double epsilon) {
  if (n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");
  DeterminantTrace trace;
  trace.times = RealVector::LinSpaced(n_samples, 0.0, control.total_time);

  const SectorEngine engine(ops);
  const std::vector<Channel> channels = engine.channel_samples(control, trace.times);
  trace.det_abs.resize(n_samples);
  for (int m = 0; m < n_samples; ++m) {
    trace.det_abs(m) = std::abs(channels[m].data.determinant());
  }

  // Merge consecutive increasing steps into intervals.
  int open_start = -1;
  for (int m = 0; m + 1 < n_samples; ++m) {
    const bool increases = trace.det_abs(m + 1) - trace.det_abs(m) > epsilon;
    if (increases && open_start < 0) open_start = m;
    if (!increases && open_start >= 0) {
      trace.nonmarkovian_intervals.emplace_back(trace.times(open_start), trace.times(m));
      open_start = -1;
    }
  }
  if (open_start >= 0) {
    trace.nonmarkovian_intervals.emplace_back(trace.times(open_start),
                                              trace.times(n_samples - 1));
  }
  return trace;
}

bool is_markovian(const DeterminantTrace& trace) {
  return trace.nonmarkovian_intervals.empty();
}

}  // namespace qoct
