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

#include "qoct/config.hpp"

#include <cmath>
#include <fstream>

namespace qoct {

using nlohmann::json;

namespace {

constexpr Complex kI{0.0, 1.0};

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ConfigError(ctx + ": unknown key '" + key + "'");
  }
}

double number_at(const json& obj, const char* key, double fallback, const std::string& ctx) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(ctx + "." + key + ": expected a number");
  return v.get<double>();
}

double lifetime_at(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key) || obj.at(key).is_null()) return kInf;
  const json& v = obj.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInf;
    throw ConfigError(ctx + "." + key + ": expected a number or \"inf\"");
  }
  if (!v.is_number()) throw ConfigError(ctx + "." + key + ": expected a number or \"inf\"");
  return v.get<double>();
}

std::int64_t integer_at(const json& obj, const char* key, std::int64_t fallback,
                        const std::string& ctx) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(ctx + "." + key + ": expected an integer");
  return v.get<std::int64_t>();
}

Matrix parse_target(const json& opt, int n, const std::string& ctx) {
  if (!opt.contains("target") || opt.at("target") == "u1") {
    Matrix u = Matrix::Identity(n, n);
    if (n >= 2) u(1, 1) = -1.0;
    return u;
  }
  const json& t = opt.at("target");
  if (t == "identity") return Matrix::Identity(n, n);
  if (t.is_object() && t.contains("diagonal_phases_rad")) {
    check_keys(t, {"diagonal_phases_rad"}, ctx + ".target");
    const auto phases = t.at("diagonal_phases_rad").get<std::vector<double>>();
    if (static_cast<int>(phases.size()) != n) {
      throw ConfigError(ctx + ".target.diagonal_phases_rad: expected " + std::to_string(n) +
                        " phases");
    }
    Matrix u = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) u(k, k) = std::exp(kI * phases[k]);
    return u;
  }
  if (t.is_object() && t.contains("random_seed")) {
    check_keys(t, {"random_seed"}, ctx + ".target");
    return random_diagonal_target(n, t.at("random_seed").get<std::uint64_t>());
  }
  throw ConfigError(ctx + ".target: expected \"u1\", \"identity\", {\"diagonal_phases_rad\":"
                    " [...]}, or {\"random_seed\": n}");
}

}  // namespace

double freq_to_internal(double config_value, FrequencyConvention convention) {
  return convention == FrequencyConvention::ordinary ? config_value * kTwoPi * 1e-3
                                                     : config_value * 1e-3;
}

double freq_to_config(double internal_value, FrequencyConvention convention) {
  return convention == FrequencyConvention::ordinary ? internal_value / (kTwoPi * 1e-3)
                                                     : internal_value / 1e-3;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("parse error in " + path + ": " + e.what());
  }
}

ModelSpec parse_model(const json& model_json) {
  check_keys(model_json, {"frequency_convention", "qudit", "tls"}, "model");
  ModelSpec m;
  if (model_json.contains("frequency_convention")) {
    const std::string conv = model_json.at("frequency_convention").get<std::string>();
    if (conv == "ordinary") {
      m.frequency_convention = FrequencyConvention::ordinary;
    } else if (conv == "angular") {
      m.frequency_convention = FrequencyConvention::angular;
    } else {
      throw ConfigError("model.frequency_convention: expected \"ordinary\" or \"angular\"");
    }
  }
  const auto conv = m.frequency_convention;

  if (model_json.contains("qudit")) {
    const json& q = model_json.at("qudit");
    check_keys(q, {"n_levels", "base_frequency_mhz", "anharmonicity_mhz", "t1_ns", "t2_star_ns"},
               "model.qudit");
    m.qudit.n_levels = static_cast<int>(integer_at(q, "n_levels", 4, "model.qudit"));
    m.qudit.base_frequency =
        freq_to_internal(number_at(q, "base_frequency_mhz", 0.0, "model.qudit"), conv);
    m.qudit.anharmonicity =
        freq_to_internal(number_at(q, "anharmonicity_mhz", 0.0, "model.qudit"), conv);
    m.qudit.t1 = lifetime_at(q, "t1_ns", "model.qudit");
    if (q.contains("t2_star_ns") && !q.at("t2_star_ns").is_null()) {
      m.qudit.t2_star = q.at("t2_star_ns").get<double>();
    }
  }
  if (model_json.contains("tls")) {
    if (!model_json.at("tls").is_array()) throw ConfigError("model.tls: expected an array");
    int i = 0;
    for (const json& t : model_json.at("tls")) {
      const std::string ctx = "model.tls[" + std::to_string(i++) + "]";
      check_keys(t, {"detuning_mhz", "coupling_mhz", "t1_ns", "t2_star_ns"}, ctx);
      TlsSpec spec;
      spec.detuning = freq_to_internal(number_at(t, "detuning_mhz", 0.0, ctx), conv);
      spec.coupling = freq_to_internal(number_at(t, "coupling_mhz", 0.0, ctx), conv);
      spec.t1 = lifetime_at(t, "t1_ns", ctx);
      if (t.contains("t2_star_ns") && !t.at("t2_star_ns").is_null()) {
        spec.t2_star = t.at("t2_star_ns").get<double>();
      }
      m.tls.push_back(spec);
    }
  }
  return m;
}

RunConfig parse_run_config(const json& config) {
  if (!config.is_object()) throw ConfigError("config root: expected an object");
  if (!config.contains("model")) throw ConfigError("config: missing \"model\" section");
  if (!config.contains("control")) throw ConfigError("config: missing \"control\" section");

  RunConfig rc;
  rc.model = parse_model(config.at("model"));
  const auto conv = rc.model.frequency_convention;

  const json& ctrl = config.at("control");
  check_keys(ctrl, {"total_time_ns", "n_slices", "ramp"}, "control");
  rc.optimization.total_time = number_at(ctrl, "total_time_ns", 40.0, "control");
  if (rc.optimization.total_time <= 0) throw ConfigError("control.total_time_ns must be > 0");
  rc.optimization.n_slices =
      static_cast<int>(integer_at(ctrl, "n_slices", 0, "control"));
  if (ctrl.contains("ramp") && !ctrl.at("ramp").is_null()) {
    const json& rj = ctrl.at("ramp");
    check_keys(rj, {"ramp_time_ns", "ramp_rate_cap_mhz_per_ns", "endpoints_zero"},
               "control.ramp");
    RampSpec ramp;
    ramp.ramp_time = number_at(rj, "ramp_time_ns", 2.5, "control.ramp");
    ramp.ramp_rate_cap = freq_to_internal(
        number_at(rj, "ramp_rate_cap_mhz_per_ns", 200.0, "control.ramp"), conv);
    if (rj.contains("endpoints_zero")) {
      ramp.endpoints_zero = rj.at("endpoints_zero").get<bool>();
    }
    if (2.0 * ramp.ramp_time >= rc.optimization.total_time) {
      throw ConfigError("control.ramp.ramp_time_ns must be < total_time_ns / 2");
    }
    rc.ramp = ramp;
  }

  const json opt = config.contains("optimization") ? config.at("optimization") : json::object();
  check_keys(opt,
             {"target", "max_iterations", "convergence_tol", "amplitude_bound_mhz", "seed",
              "optimizer", "n_starts", "stop_below_error", "initial_control",
              "allow_nondiagonal_target"},
             "optimization");
  rc.optimization.target = parse_target(opt, rc.model.qudit.n_levels, "optimization");
  rc.optimization.max_iterations =
      static_cast<int>(integer_at(opt, "max_iterations", 300, "optimization"));
  rc.optimization.convergence_tol =
      number_at(opt, "convergence_tol", 1e-9, "optimization");
  rc.optimization.amplitude_bound = freq_to_internal(
      number_at(opt, "amplitude_bound_mhz", 1000.0, "optimization"), conv);
  rc.optimization.seed = static_cast<std::uint64_t>(
      integer_at(opt, "seed", 0, "optimization"));
  rc.optimization.n_starts =
      static_cast<int>(integer_at(opt, "n_starts", 5, "optimization"));
  rc.optimization.stop_below_error =
      number_at(opt, "stop_below_error", 0.0, "optimization");
  if (opt.contains("allow_nondiagonal_target")) {
    rc.optimization.allow_nondiagonal_target = opt.at("allow_nondiagonal_target").get<bool>();
  }
  if (opt.contains("optimizer")) {
    const std::string name = opt.at("optimizer").get<std::string>();
    if (name == "lbfgs") {
      rc.optimization.optimizer = OptimizerKind::lbfgs;
    } else if (name == "gradient_descent_backtracking") {
      rc.optimization.optimizer = OptimizerKind::gradient_descent_backtracking;
    } else {
      throw ConfigError(
          "optimization.optimizer: expected \"lbfgs\" or \"gradient_descent_backtracking\"");
    }
  }
  if (opt.contains("initial_control") && !opt.at("initial_control").is_null()) {
    const int n_slices = rc.optimization.n_slices > 0
                             ? rc.optimization.n_slices
                             : static_cast<int>(std::llround(rc.optimization.total_time * 10));
    const json& ic = opt.at("initial_control");
    if (ic == "zero") {
      rc.optimization.initial_control = RealVector::Zero(n_slices);
    } else if (ic.is_array()) {
      const auto vals = ic.get<std::vector<double>>();
      if (static_cast<int>(vals.size()) != n_slices) {
        throw ConfigError("optimization.initial_control: expected " +
                          std::to_string(n_slices) + " values");
      }
      RealVector v(n_slices);
      for (int j = 0; j < n_slices; ++j) v(j) = freq_to_internal(vals[j], conv);
      rc.optimization.initial_control = v;
    } else {
      throw ConfigError("optimization.initial_control: expected \"zero\" or an array of MHz values");
    }
  }
  return rc;
}

std::uint64_t config_hash(const json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash_hex(const json& config) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  return buf;
}

}  // namespace qoct
