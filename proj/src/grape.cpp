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

#include "qoct/grape.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

#include "qoct/rng.hpp"
#include "qoct/sector_engine.hpp"

namespace qoct {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_unitary_target(const Matrix& u) {
  const Matrix gram = u.adjoint() * u;
  if ((gram - Matrix::Identity(u.rows(), u.cols())).norm() > 1e-10) {
    throw std::invalid_argument("target matrix is not unitary");
  }
}

double max_offdiagonal(const Matrix& u) {
  double m = 0.0;
  for (int c = 0; c < u.cols(); ++c) {
    for (int r = 0; r < u.rows(); ++r) {
      if (r != c) m = std::max(m, std::abs(u(r, c)));
    }
  }
  return m;
}

/// Reduced-variable view of a ramped control: the free interior slices are
/// the optimization variables; locked boundary slices carry fixed linear
/// weights of the adjacent free value.
struct ReducedProblem {
  int n = 0;          // total slices
  int r = 0;          // locked slices per side
  double dt = 0.0;
  double delta_max = 0.0;
  double edge_bound = 0.0;  // bound on the boundary free values (rate cap)

  int n_free() const { return n - 2 * r; }

  RealVector expand(const RealVector& theta) const {
    RealVector full(n);
    full.segment(r, n_free()) = theta;
    for (int j = 0; j < r; ++j) {
      const double w = (j + 0.5) / r;
      full(j) = theta(0) * w;
      full(n - 1 - j) = theta(theta.size() - 1) * w;
    }
    return full;
  }

  RealVector chain(const RealVector& g_full) const {
    RealVector g = g_full.segment(r, n_free());
    for (int j = 0; j < r; ++j) {
      const double w = (j + 0.5) / r;
      g(0) += g_full(j) * w;
      g(g.size() - 1) += g_full(n - 1 - j) * w;
    }
    return g;
  }

  RealVector project(RealVector theta) const {
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      theta(i) = std::clamp(theta(i), -delta_max, delta_max);
    }
    if (r > 0) {
      theta(0) = std::clamp(theta(0), -edge_bound, edge_bound);
      theta(theta.size() - 1) = std::clamp(theta(theta.size() - 1), -edge_bound, edge_bound);
    }
    return theta;
  }
};

ReducedProblem make_reduced(int n_slices, double dt, const std::optional<RampSpec>& ramp,
                            double delta_max) {
  ReducedProblem red;
  red.n = n_slices;
  red.dt = dt;
  red.delta_max = delta_max;
  red.r = ramp ? ramp->locked_slices(dt) : 0;
  if (2 * red.r >= n_slices) {
    throw std::invalid_argument("ramp leaves no free slices");
  }
  red.edge_bound =
      ramp && red.r > 0 ? std::min(delta_max, ramp->ramp_rate_cap * red.r * dt) : delta_max;
  return red;
}

struct StartOutcome {
  RealVector theta;
  std::vector<double> history;
  double error = 1.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string status;
};

/// One optimizer run from a fixed starting point. `fg` returns the objective
/// and reduced gradient; `f` evaluates the objective only (line searches).
template <typename FG, typename F>
StartOutcome run_start(const ReducedProblem& red, const OptimizationConfig& cfg,
                       RealVector theta0, FG&& fg, F&& f) {
  StartOutcome out;
  RealVector theta = red.project(std::move(theta0));
  auto [e, g] = fg(theta);
  out.history.push_back(e);

  std::deque<RealVector> mem_s, mem_y;
  const int memory = 10;
  const double c1 = 1e-4;

  auto two_loop = [&](const RealVector& grad) {
    RealVector q = grad;
    const int m = static_cast<int>(mem_s.size());
    std::vector<double> alpha(m), rho(m);
    for (int i = m - 1; i >= 0; --i) {
      rho[i] = 1.0 / mem_y[i].dot(mem_s[i]);
      alpha[i] = rho[i] * mem_s[i].dot(q);
      q -= alpha[i] * mem_y[i];
    }
    if (m > 0) q *= mem_s[m - 1].dot(mem_y[m - 1]) / mem_y[m - 1].squaredNorm();
    for (int i = 0; i < m; ++i) {
      const double beta = rho[i] * mem_y[i].dot(q);
      q += (alpha[i] - beta) * mem_s[i];
    }
    return q;
  };

  out.status = "max_iterations";
  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    if (g.norm() < 1e-10) {
      out.converged = true;
      out.status = "gradient_norm";
      break;
    }
    if (e <= cfg.stop_below_error && cfg.stop_below_error > 0) {
      out.converged = true;
      out.status = "stop_below_error";
      break;
    }

    RealVector dir;
    if (cfg.optimizer == OptimizerKind::lbfgs && !mem_s.empty()) {
      dir = -two_loop(g);
      if (dir.dot(g) > -1e-14 * dir.norm() * g.norm()) {
        mem_s.clear();
        mem_y.clear();
        dir = -g;
      }
    } else {
      dir = -g;
    }

    bool accepted = false;
    RealVector theta_new;
    double e_new = e;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double alpha = 1.0;
      for (int bt = 0; bt < 40; ++bt) {
        theta_new = red.project(theta + alpha * dir);
        const RealVector step = theta_new - theta;
        if (step.norm() < 1e-16) break;
        e_new = f(theta_new);
        if (e_new <= e + c1 * g.dot(step)) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted && attempt == 0) {
        if ((dir + g).norm() < 1e-15) break;  // already steepest descent
        mem_s.clear();
        mem_y.clear();
        dir = -g;
      }
    }
    if (!accepted) {
      out.status = "line_search_failed";
      break;
    }

    auto [e2, g_new] = fg(theta_new);
    e_new = e2;
    if (cfg.optimizer == OptimizerKind::lbfgs) {
      const RealVector s = theta_new - theta;
      const RealVector y = g_new - g;
      if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
        mem_s.push_back(s);
        mem_y.push_back(y);
        if (static_cast<int>(mem_s.size()) > memory) {
          mem_s.pop_front();
          mem_y.pop_front();
        }
      }
    }
    const double change = e - e_new;
    theta = std::move(theta_new);
    e = e_new;
    g = std::move(g_new);
    out.history.push_back(e);
    out.iterations = iter;
    if (e <= cfg.stop_below_error && cfg.stop_below_error > 0) {
      out.converged = true;
      out.status = "stop_below_error";
      break;
    }
    if (change < cfg.convergence_tol) {
      out.converged = true;
      out.status = "convergence_tol";
      break;
    }
  }

  out.theta = std::move(theta);
  out.error = e;
  out.grad_norm = g.norm();
  return out;
}

RealVector initial_guess(const ReducedProblem& red, const OperatorSet& ops,
                         std::uint64_t seed, double total_time) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double beta = ops.model.qudit.anharmonicity;
  const bool has_tls = !ops.model.tls.empty();
  const double delta1 = has_tls ? ops.model.tls.front().detuning : 0.0;

  double offset;
  if (has_tls && std::abs(delta1) > 0) {
    // Pull the 1<->2 transition toward resonance with the first defect.
    offset = -(delta1 + 2.0 * beta) * (0.75 + 0.30 * unit(rng));
  } else {
    offset = (2.0 * unit(rng) - 1.0) * 0.25 * red.delta_max;
  }
  const double amp = has_tls && std::abs(delta1) > 0 ? std::abs(delta1) / 2.0
                                                     : 0.25 * red.delta_max;
  const int n_components = 3 + static_cast<int>(unit(rng) * 4.0);  // 3..6

  const int nf = red.n_free();
  RealVector theta = RealVector::Constant(nf, offset);
  for (int k = 0; k < n_components; ++k) {
    const double a = (2.0 * unit(rng) - 1.0) * amp / (k + 1);
    const double phase = kTwoPi * unit(rng);
    const double freq = 0.5 * kTwoPi * (k + 1) / total_time;
    for (int i = 0; i < nf; ++i) {
      const double t = (red.r + i + 0.5) * red.dt;
      theta(i) += a * std::sin(freq * t + phase);
    }
  }
  return theta;
}

}  // namespace

double objective(const OperatorSet& ops, const PiecewiseControl& control, const Matrix& target) {
  require_unitary_target(target);
  return SectorEngine(ops).objective(control, target);
}

RealVector gradient(const OperatorSet& ops, const PiecewiseControl& control, const Matrix& target) {
  require_unitary_target(target);
  RealVector g = SectorEngine(ops).objective_gradient(control, target).second;
  if (control.ramp) {
    const int r = control.ramp->locked_slices(control.dt());
    for (int j = 0; j < r; ++j) {
      g(j) = 0.0;
      g(control.n_slices - 1 - j) = 0.0;
    }
  }
  return g;
}

PiecewiseControl apply_constraints(const PiecewiseControl& control, const RampSpec& ramp,
                                   double delta_max) {
  if (2.0 * ramp.ramp_time >= control.total_time) {
    throw std::invalid_argument("ramp_time must be < total_time / 2");
  }
  PiecewiseControl out = control;
  out.ramp = ramp;
  for (Eigen::Index j = 0; j < out.values.size(); ++j) {
    out.values(j) = std::clamp(out.values(j), -delta_max, delta_max);
  }
  const int r = ramp.locked_slices(control.dt());
  if (r == 0) return out;
  const int n = control.n_slices;
  const double edge_bound = std::min(delta_max, ramp.ramp_rate_cap * r * control.dt());
  const double c0 = std::clamp(out.values(r), -edge_bound, edge_bound);
  const double c1 = std::clamp(out.values(n - 1 - r), -edge_bound, edge_bound);
  out.values(r) = c0;
  out.values(n - 1 - r) = c1;
  for (int j = 0; j < r; ++j) {
    const double w = (j + 0.5) / r;
    out.values(j) = c0 * w;
    out.values(n - 1 - j) = c1 * w;
  }
  return out;
}

OptimizationResult optimize(const OperatorSet& ops, const OptimizationConfig& config,
                            const std::optional<RampSpec>& ramp) {
  const auto t0 = std::chrono::steady_clock::now();
  require_unitary_target(config.target);
  if (config.target.rows() != ops.model.qudit.n_levels) {
    throw std::invalid_argument("target dimension does not match the qudit");
  }
  if (!config.allow_nondiagonal_target && max_offdiagonal(config.target) > 1e-12) {
    throw std::invalid_argument("target must be diagonal (or explicitly overridden)");
  }
  if (config.amplitude_bound <= 0) throw std::invalid_argument("amplitude_bound must be > 0");
  if (config.n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");
  const int n_slices =
      config.n_slices > 0 ? config.n_slices
                          : static_cast<int>(std::llround(config.total_time * 10.0));
  if (ramp && 2.0 * ramp->ramp_time >= config.total_time) {
    throw std::invalid_argument("ramp_time must be < total_time / 2");
  }

  const SectorEngine engine(ops);
  const ReducedProblem red =
      make_reduced(n_slices, config.total_time / n_slices, ramp, config.amplitude_bound);

  PiecewiseControl work;
  work.total_time = config.total_time;
  work.n_slices = n_slices;
  work.ramp = ramp;

  auto fg = [&](const RealVector& theta) {
    work.values = red.expand(theta);
    auto [e, g_full] = engine.objective_gradient(work, config.target);
    return std::make_pair(e, red.chain(g_full));
  };
  auto f = [&](const RealVector& theta) {
    work.values = red.expand(theta);
    return engine.objective(work, config.target);
  };

  OptimizationResult result;
  bool have_best = false;
  StartOutcome best;
  for (int s = 0; s < config.n_starts; ++s) {
    RealVector theta0;
    if (s == 0 && config.initial_control) {
      if (config.initial_control->size() != n_slices) {
        throw std::invalid_argument("initial_control length must equal n_slices");
      }
      theta0 = config.initial_control->segment(red.r, red.n_free());
    } else {
      theta0 = initial_guess(red, ops, derive_point_seed(config.seed, s), config.total_time);
    }
    StartOutcome outcome = run_start(red, config, std::move(theta0), fg, f);
    if (!have_best || outcome.error < best.error) {
      best = std::move(outcome);
      result.best_start = s;
      have_best = true;
    }
    if (config.stop_below_error > 0 && best.error <= config.stop_below_error) break;
  }

  result.best_control = work;
  result.best_control.values = red.expand(best.theta);
  result.error_history = std::move(best.history);
  result.final_error = best.error;
  result.gradient_norm_final = best.grad_norm;
  result.iterations = best.iterations;
  result.converged = best.converged;
  result.status = best.status;
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

Matrix random_diagonal_target(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, kTwoPi);
  Matrix u = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) u(k, k) = std::exp(kI * unit(rng));
  return u;
}

}  // namespace qoct
