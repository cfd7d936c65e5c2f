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

#include <json.hpp>

#include "qoct/grape.hpp"
#include "qoct/model.hpp"

namespace qoct {

/// Raised for malformed or inconsistent config files; the CLI maps it to a
/// nonzero exit code with the offending field in the message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fully resolved single-run configuration.
struct RunConfig {
  ModelSpec model;
  OptimizationConfig optimization;   ///< includes total_time / n_slices
  std::optional<RampSpec> ramp;
};

/// Frequency conversion between config units (MHz-like) and internal rad/ns.
double freq_to_internal(double config_value, FrequencyConvention convention);
double freq_to_config(double internal_value, FrequencyConvention convention);

/// Loads and parses a JSON file; parse errors include position diagnostics.
nlohmann::json load_json(const std::string& path);

/// Parses the "model" section. Unknown keys are rejected.
ModelSpec parse_model(const nlohmann::json& model_json);

/// Parses a full run config ("model", "control", "optimization" sections).
RunConfig parse_run_config(const nlohmann::json& config);

/// FNV-1a 64-bit hash of the canonical (sorted-key) JSON dump; recorded in
/// every output file for provenance.
std::uint64_t config_hash(const nlohmann::json& config);
std::string config_hash_hex(const nlohmann::json& config);

}  // namespace qoct
