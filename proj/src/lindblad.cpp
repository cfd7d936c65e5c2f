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

#include "qoct/lindblad.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qoct/sector_engine.hpp"

namespace qoct {

namespace {
constexpr Complex kI{0.0, 1.0};

void require_unitary(const Matrix& u, double tol = 1e-10) {
  const Matrix gram = u.adjoint() * u;
  const double dev = (gram - Matrix::Identity(u.rows(), u.cols())).norm();
  if (dev > tol) throw std::invalid_argument("target matrix is not unitary");
}
}  // namespace

Superoperator liouvillian(const Matrix& hamiltonian, const std::vector<Matrix>& collapse_ops) {
  const int d = static_cast<int>(hamiltonian.rows());
  if (hamiltonian.cols() != d) throw std::invalid_argument("hamiltonian not square");
  const Matrix eye = Matrix::Identity(d, d);
  Matrix l = -kI * (Eigen::kroneckerProduct(eye, hamiltonian).eval() -
                    Eigen::kroneckerProduct(hamiltonian.transpose(), eye).eval());
  for (const Matrix& a : collapse_ops) {
    if (a.rows() != d || a.cols() != d) {
      throw std::invalid_argument("collapse operator dimension mismatch");
    }
    const Matrix ata = a.adjoint() * a;
    l += Eigen::kroneckerProduct(a.conjugate(), a).eval();
    l -= 0.5 * Eigen::kroneckerProduct(eye, ata).eval();
    l -= 0.5 * Eigen::kroneckerProduct(ata.transpose(), eye).eval();
  }
  return Superoperator{d, std::move(l)};
}

Superoperator propagate_slice(const Superoperator& liou, double dt) {
  if (!(dt >= 0)) throw std::invalid_argument("dt must be non-negative");
  if (!liou.data.allFinite()) throw std::invalid_argument("non-finite generator");
  if (dt == 0.0) {
    return Superoperator{liou.dim, Matrix::Identity(liou.data.rows(), liou.data.cols())};
  }
  return Superoperator{liou.dim, (liou.data * dt).exp()};
}

Superoperator propagator(const OperatorSet& ops, const PiecewiseControl& control) {
  if (control.n_slices < 1 || control.values.size() != control.n_slices) {
    throw std::invalid_argument("control must have n_slices >= 1 values");
  }
  const double dt = control.dt();
  const Matrix d_mat = ops.control_generator();
  Superoperator g{ops.dim(), Matrix::Identity(ops.dim() * ops.dim(), ops.dim() * ops.dim())};
  for (int j = 0; j < control.n_slices; ++j) {
    const Matrix h = ops.drift + control.values(j) * d_mat;
    const Superoperator step = propagate_slice(liouvillian(h, ops.collapse_ops), dt);
    g.data = (step.data * g.data).eval();
  }
  return g;
}

DensityMatrix apply_superoperator(const Superoperator& s, const DensityMatrix& rho) {
  if (rho.dim != s.dim) throw std::invalid_argument("dimension mismatch");
  const Eigen::Map<const Vector> v(rho.data.data(), rho.dim * rho.dim);
  Vector out = s.data * v;
  DensityMatrix result;
  result.dim = rho.dim;
  result.data = Eigen::Map<const Matrix>(out.data(), rho.dim, rho.dim);
  return result;
}

Channel reduced_channel(const OperatorSet& ops, const PiecewiseControl& control, double t) {
  if (t < -1e-12 || t > control.total_time + 1e-9) {
    throw std::invalid_argument("t outside [0, total_time]");
  }
  const SectorEngine engine(ops);
  return engine.channel(control, std::max(t, 0.0));
}

double average_fidelity(const Channel& ch, const Matrix& target) {
  const int n = ch.system_dim;
  if (target.rows() != n || target.cols() != n) {
    throw std::invalid_argument("target dimension mismatch");
  }
  require_unitary(target);
  double f_pro = 0.0;
  for (int c0 = 0; c0 < n * n; ++c0) {
    const int k = c0 % n;
    const int l = c0 / n;
    // vec(U E_kl U^dag)[l'*n + k'] = U(k',k) conj(U(l',l))
    Complex acc = 0.0;
    for (int r0 = 0; r0 < n * n; ++r0) {
      const Complex w = target(r0 % n, k) * std::conj(target(r0 / n, l));
      acc += std::conj(w) * ch.data(r0, c0);
    }
    f_pro += acc.real();
  }
  f_pro /= static_cast<double>(n * n);
  return (n * f_pro + 1.0) / (n + 1.0);
}

DensityMatrix partial_trace_env(const DensityMatrix& rho, const ModelSpec& model) {
  const int n = model.qudit.n_levels;
  const int env = model.env_dim();
  if (rho.dim != n * env) throw std::invalid_argument("dimension mismatch");
  DensityMatrix out;
  out.dim = n;
  out.data = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      Complex acc = 0.0;
      for (int tau = 0; tau < env; ++tau) acc += rho.data(k * env + tau, l * env + tau);
      out.data(k, l) = acc;
    }
  }
  return out;
}

Matrix choi_matrix(const Channel& ch) {
  const int n = ch.system_dim;
  Matrix choi = Matrix::Zero(n * n, n * n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const int c0 = l * n + k;  // vec index of E_kl
      // Lambda(E_kl) as a matrix, scattered into block (k, l).
      for (int kp = 0; kp < n; ++kp) {
        for (int lp = 0; lp < n; ++lp) {
          choi(k * n + kp, l * n + lp) = ch.data(lp * n + kp, c0);
        }
      }
    }
  }
  return choi;
}

}  // namespace qoct
