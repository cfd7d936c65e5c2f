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

#include <json.hpp>

#include "qoct/config.hpp"
#include "qoct/grape.hpp"

namespace qoct {

/// Code version stamped into output files alongside the config hash.
inline constexpr const char* kVersion = "0.1.0";

/// One sweep axis: a JSON-pointer path into the run config plus its values.
struct SweepAxis {
  std::string path;             ///< e.g. "/model/qudit/t1_ns"
  std::vector<double> values;   ///< non-empty
};

struct SweepRow {
  std::vector<int> grid_index;      ///< per-axis index
  std::vector<double> axis_values;  ///< per-axis value (config units)
  double final_error = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
  std::string status;               ///< "ok" or "error: ..."
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<SweepRow> rows;       ///< deterministic grid order (axis 0 outer)
  std::string config_hash;
};

/// Optional overrides shared by all harness entry points (CLI flags).
struct HarnessOptions {
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out_dir = ".";
};

/// Single optimization: runs the config, writes pulse.csv, error_history.csv,
/// determinant_trace.csv and summary.txt into out_dir.
OptimizationResult run_optimize(const nlohmann::json& config, const HarnessOptions& options);

/// Grid sweep over up to two axes ("sweep" section); per-point seeds derived
/// from (global seed, point index); points run on `workers` threads with a
/// worker-count-independent reduction. Writes sweep.csv.
SweepResult run_sweep(const nlohmann::json& config, const HarnessOptions& options);

/// Two-defect table: grid of (detuning offset, coupling, lifetime) for a
/// second defect added to the base model ("table1" section, defaults
/// delta2 {50,450} MHz x S2 {40,10} MHz x T1 {2000,200,40} ns). Optionally
/// warm-starts every point from the base-model optimum. Writes table1.csv.
SweepResult run_table1(const nlohmann::json& config, const HarnessOptions& options);

/// Batch over n random diagonal targets plus the configured target as row 0;
/// writes random_targets.csv and a min/max/median summary.
SweepResult run_random_targets(int n, const nlohmann::json& config,
                               const HarnessOptions& options);

}  // namespace qoct
