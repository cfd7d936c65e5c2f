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

#include "qoct/model.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace qoct {

namespace {

void require_lifetime(double t1, const char* what) {
  if (std::isnan(t1) || t1 <= 0.0) {
    throw std::invalid_argument(std::string(what) + " must be positive or infinite");
  }
}

void validate(const ModelSpec& m) {
  if (m.qudit.n_levels < 2) throw std::invalid_argument("n_levels must be >= 2");
  if (m.n_tls() > 12) throw std::invalid_argument("too many TLS (limit 12)");
  if (!std::isfinite(m.qudit.anharmonicity)) {
    throw std::invalid_argument("non-finite model parameter: anharmonicity");
  }
  if (!std::isfinite(m.qudit.base_frequency)) {
    throw std::invalid_argument("non-finite model parameter: base_frequency");
  }
  require_lifetime(m.qudit.t1, "qudit t1");
  if (m.qudit.t2_star) require_lifetime(*m.qudit.t2_star, "qudit t2_star");
  for (const TlsSpec& t : m.tls) {
    if (!std::isfinite(t.detuning)) {
      throw std::invalid_argument("non-finite model parameter: tls detuning");
    }
    if (!std::isfinite(t.coupling) || t.coupling < 0) {
      throw std::invalid_argument("tls coupling must be finite and >= 0");
    }
    require_lifetime(t.t1, "tls t1");
    if (t.t2_star) require_lifetime(*t.t2_star, "tls t2_star");
  }
}

/// Identity of dimension n.
Matrix eye(int n) { return Matrix::Identity(n, n); }

/// Embeds `op` acting on TLS index i (0-based) into the 2^k environment factor.
Matrix embed_tls(const Matrix& op, int i, int n_tls) {
  Matrix out = eye(1);
  for (int j = 0; j < n_tls; ++j) {
    const Matrix& f = (j == i) ? op : eye(2);
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

}  // namespace

Matrix OperatorSet::control_generator() const {
  Matrix d = Matrix::Zero(dim(), dim());
  d.diagonal() = control_diag.cast<Complex>();
  return d;
}

Matrix OperatorSet::excitation_number() const {
  Matrix n = Matrix::Zero(dim(), dim());
  n.diagonal() = excitation.cast<double>().cast<Complex>();
  return n;
}

Matrix lowering_operator(int n_levels) {
  Matrix a = Matrix::Zero(n_levels, n_levels);
  for (int n = 1; n < n_levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

OperatorSet build_operators(const ModelSpec& model) {
  validate(model);
  const int n = model.qudit.n_levels;
  const int k = model.n_tls();
  const int env = model.env_dim();
  const int d = n * env;
  const double beta = model.qudit.anharmonicity;

  OperatorSet ops;
  ops.model = model;

  // Qudit factor operators.
  Matrix h_q = Matrix::Zero(n, n);
  RealVector level_number(n);
  for (int lvl = 0; lvl < n; ++lvl) {
    h_q(lvl, lvl) = beta * lvl * (lvl + 1) / 2.0;
    level_number(lvl) = lvl;
  }
  const Matrix a_op = lowering_operator(n);
  const Matrix env_eye = eye(env);

  // Drift: anharmonic ladder, detuned defects, excitation exchange.
  Matrix drift = Eigen::kroneckerProduct(h_q, env_eye);
  const Matrix sigma_minus = (Matrix(2, 2) << 0, 1, 0, 0).finished();
  const Matrix sigma_plus = sigma_minus.adjoint();
  const Matrix sigma_ee = sigma_plus * sigma_minus;  // |e><e|
  for (int i = 0; i < k; ++i) {
    const TlsSpec& t = model.tls[i];
    drift -= t.detuning * Eigen::kroneckerProduct(eye(n), embed_tls(sigma_ee, i, k));
    const Matrix exch = Eigen::kroneckerProduct(a_op, embed_tls(sigma_plus, i, k));
    drift += (t.coupling / 2.0) * (exch + exch.adjoint());
  }
  ops.drift = drift;

  // Control generator: per-level shift delta(t) * n |n><n| (x) I.
  ops.control_diag = RealVector::Zero(d);
  for (int lvl = 0; lvl < n; ++lvl) {
    ops.control_diag.segment(lvl * env, env).setConstant(level_number(lvl));
  }

  // Total excitation count per basis state (qudit level + set TLS bits).
  ops.excitation = Eigen::VectorXi::Zero(d);
  for (int idx = 0; idx < d; ++idx) {
    int exc = idx / env;
    int bits = idx % env;
    for (int i = 0; i < k; ++i) exc += (bits >> (k - 1 - i)) & 1;
    ops.excitation(idx) = exc;
  }

  // Collapse operators: ladder decay, defect decay, optional pure dephasing.
  for (int lvl = 1; lvl < n; ++lvl) {
    if (!std::isfinite(model.qudit.t1)) continue;
    Matrix low = Matrix::Zero(n, n);
    low(lvl - 1, lvl) = std::sqrt(lvl / model.qudit.t1);
    ops.collapse_ops.push_back(Eigen::kroneckerProduct(low, env_eye));
  }
  for (int i = 0; i < k; ++i) {
    if (!std::isfinite(model.tls[i].t1)) continue;
    const double rate = std::sqrt(1.0 / model.tls[i].t1);
    ops.collapse_ops.push_back(
        rate * Eigen::kroneckerProduct(eye(n), embed_tls(sigma_minus, i, k)));
  }
  if (model.qudit.t2_star) {
    Matrix deph = Matrix::Zero(n, n);
    deph.diagonal() = (level_number * std::sqrt(1.0 / (2.0 * *model.qudit.t2_star)))
                          .cast<Complex>();
    ops.collapse_ops.push_back(Eigen::kroneckerProduct(deph, env_eye));
  }
  const Matrix sigma_z = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  for (int i = 0; i < k; ++i) {
    if (!model.tls[i].t2_star) continue;
    const double rate = std::sqrt(1.0 / (2.0 * *model.tls[i].t2_star));
    ops.collapse_ops.push_back(
        rate * Eigen::kroneckerProduct(eye(n), embed_tls(sigma_z, i, k)));
  }
  return ops;
}

bool validate_excitation_conservation(const OperatorSet& ops, double tol) {
  const int d = ops.dim();
  // D is stored as a diagonal, so [D, N_tot] = 0 holds by construction; the
  // drift must not connect different total-excitation sectors.
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const int dq = ops.excitation(r) - ops.excitation(c);
      if (dq != 0 && std::abs(ops.drift(r, c)) > tol) return false;
    }
  }
  for (const Matrix& a : ops.collapse_ops) {
    // Dephasing operators (diagonal) preserve excitation; decay operators must
    // lower it by exactly one. Accept either uniform behavior per operator.
    bool lowers = false, preserves = false;
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        if (std::abs(a(r, c)) <= tol) continue;
        const int dq = ops.excitation(r) - ops.excitation(c);
        if (dq == -1) {
          lowers = true;
        } else if (dq == 0) {
          preserves = true;
        } else {
          return false;
        }
      }
    }
    if (lowers && preserves) return false;
  }
  return true;
}

}  // namespace qoct
