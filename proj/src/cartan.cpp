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

#include "qoct/cartan.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qoct {

namespace {
constexpr Complex kI{0.0, 1.0};

/// Wraps an angle to (-pi, pi].
double wrap_phase(double a) {
  const double pi = kTwoPi / 2.0;
  a = std::fmod(a, kTwoPi);
  if (a <= -pi) a += kTwoPi;
  if (a > pi) a -= kTwoPi;
  return a;
}
}  // namespace

Matrix KakDecomposition::reconstruct() const {
  const int n = static_cast<int>(k1.rows());
  Matrix a = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) a(j, j) = std::exp(kI * a_phases(j));
  return std::exp(kI * global_phase) * (k1.cast<Complex>() * a * k2.cast<Complex>());
}

KakDecomposition kak_decompose(const Matrix& u) {
  const int n = static_cast<int>(u.rows());
  if (u.cols() != n) throw std::invalid_argument("input must be square");
  if ((u.adjoint() * u - Matrix::Identity(n, n)).norm() > 1e-10) {
    throw std::invalid_argument("input is not unitary");
  }

  // M = U U^T is symmetric unitary; its real and imaginary parts are real
  // symmetric, commute, and satisfy X^2 + Y^2 = I, so a joint eigenbasis is
  // real orthogonal and the joint eigenvalue pairs (x_j, y_j) lie on the unit
  // circle: x_j + i y_j = e^{i theta_j}.
  const Matrix m = u * u.transpose();
  const RealMatrix x = m.real();
  const RealMatrix y = m.imag();
  const double scale = std::max(1.0, m.norm());

  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);  // fixed: decomposition is deterministic
  std::uniform_real_distribution<double> unit(0.25, 0.75);

  KakDecomposition out;
  double best_residual = kInf;
  for (int attempt = 0; attempt < 8; ++attempt) {
    // A generic combination separates joint eigenspaces. cos/sin weighting
    // keeps the combination bounded; the first attempt is a fixed mix, later
    // attempts re-randomize to escape accidental eigenvalue collisions.
    const double t = attempt == 0 ? 0.37 : unit(rng);
    const double c = std::cos(t);
    const double s = std::sin(t);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(c * x + s * y);
    if (es.info() != Eigen::Success) continue;
    const RealMatrix o = es.eigenvectors();

    // Joint diagonality check: the same basis must diagonalize X and Y.
    const RealMatrix xd = o.transpose() * x * o;
    const RealMatrix yd = o.transpose() * y * o;
    double offdiag = 0.0;
    for (int col = 0; col < n; ++col) {
      for (int row = 0; row < n; ++row) {
        if (row != col) offdiag = std::max(offdiag, std::abs(xd(row, col)) + std::abs(yd(row, col)));
      }
    }
    if (offdiag > 1e-11 * scale && attempt < 7) continue;

    RealVector phases(n);
    for (int j = 0; j < n; ++j) {
      const double theta = std::atan2(yd(j, j), xd(j, j));  // in (-pi, pi]
      phases(j) = theta / 2.0;
    }
    RealMatrix k1 = o;

    auto a_inverse = [&]() {
      Matrix ai = Matrix::Zero(n, n);
      for (int j = 0; j < n; ++j) ai(j, j) = std::exp(-kI * phases(j));
      return ai;
    };

    // k2 = A^{-1} k1^T U is real orthogonal when O truly diagonalizes M.
    Matrix k2c = a_inverse() * k1.transpose().cast<Complex>() * u;
    if (k2c.imag().cwiseAbs().maxCoeff() > 1e-9 && attempt < 7) continue;

    // Determinant fixes keep both factors special orthogonal: a column flip
    // of k1 pairs with a pi shift of the matching phase; same for a row of k2.
    if (k1.determinant() < 0) {
      k1.col(0) *= -1.0;
      phases(0) = wrap_phase(phases(0) + kTwoPi / 2.0);
      k2c = a_inverse() * k1.transpose().cast<Complex>() * u;
    }
    RealMatrix k2 = k2c.real();
    if (k2.determinant() < 0) {
      phases(0) = wrap_phase(phases(0) + kTwoPi / 2.0);
      k2.row(0) *= -1.0;
    }

    KakDecomposition cand;
    cand.k1 = k1;
    cand.k2 = k2;
    cand.a_phases = phases;
    cand.global_phase = 0.0;
    cand.residual = (cand.reconstruct() - u).norm();
    if (cand.residual < best_residual) {
      best_residual = cand.residual;
      out = cand;
    }
    if (best_residual <= 1e-9 * std::max(1.0, u.norm())) return out;
  }
  if (best_residual <= 1e-9 * std::max(1.0, u.norm())) return out;
  throw std::runtime_error("kak_decompose: residual tolerance not met after retries");
}

bool is_special_orthogonal(const RealMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if ((m.transpose() * m - RealMatrix::Identity(m.rows(), m.cols())).norm() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

}  // namespace qoct
