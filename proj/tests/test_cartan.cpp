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

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qoct;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 gen(2024);
  return gen;
}

Matrix haar_unitary(int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(gauss(rng()), gauss(rng()));
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex piv = r(j, j);
    q.col(j) *= piv / std::abs(piv);
  }
  return q;
}

RealMatrix random_special_orthogonal(int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(rng());
  Eigen::HouseholderQR<RealMatrix> qr(a);
  RealMatrix q = qr.householderQ();
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

Matrix assemble(const RealMatrix& k1, const RealVector& phases, const RealMatrix& k2) {
  Vector diag(phases.size());
  for (Eigen::Index j = 0; j < phases.size(); ++j) {
    diag(j) = std::exp(Complex(0, 1) * phases(j));
  }
  return k1.cast<Complex>() * diag.asDiagonal() * k2.cast<Complex>();
}

void check_valid(const Matrix& u, const KakDecomposition& kak, double residual_tol = 1e-9) {
  CHECK(is_special_orthogonal(kak.k1, 1e-10));
  CHECK(is_special_orthogonal(kak.k2, 1e-10));
  CHECK(kak.residual <= residual_tol);
  CHECK((kak.reconstruct() - u).norm() <= residual_tol * std::max(1.0, u.norm()) * 10.0);
  for (Eigen::Index j = 0; j < kak.a_phases.size(); ++j) {
    CHECK(kak.a_phases(j) <= kTwoPi / 2.0 + 1e-12);
    CHECK(kak.a_phases(j) > -kTwoPi / 2.0 - 1e-12);
  }
}

}  // namespace

TEST_CASE("identity decomposes exactly") {
  const Matrix u = Matrix::Identity(4, 4);
  const KakDecomposition kak = kak_decompose(u);
  check_valid(u, kak, 1e-12);
}

TEST_CASE("special orthogonal inputs decompose with trivial phases") {
  for (int trial = 0; trial < 20; ++trial) {
    const RealMatrix o = random_special_orthogonal(4);
    const Matrix u = o.cast<Complex>();
    const KakDecomposition kak = kak_decompose(u);
    check_valid(u, kak);
    // UU^T = I, so the middle factor squares to the identity: phases in {0, pi}.
    for (Eigen::Index j = 0; j < kak.a_phases.size(); ++j) {
      const double p = std::abs(kak.a_phases(j));
      CHECK((p < 1e-7 || std::abs(p - kTwoPi / 2.0) < 1e-7));
    }
  }
}

TEST_CASE("diagonal unitaries keep their diagonal through the decomposition") {
  RealVector phases(4);
  phases << 0.0, 1.1, -2.3, 0.4;
  Matrix u = Matrix::Zero(4, 4);
  for (int j = 0; j < 4; ++j) u(j, j) = std::exp(Complex(0, 1) * phases(j));
  const KakDecomposition kak = kak_decompose(u);
  check_valid(u, kak);
  const Matrix rec = kak.reconstruct();
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(rec(j, j) - u(j, j)) < 1e-10);
  }
}

TEST_CASE("Haar-random unitaries of several sizes decompose") {
  for (int n : {2, 3, 4, 5}) {
    for (int trial = 0; trial < (n == 4 ? 60 : 20); ++trial) {
      const Matrix u = haar_unitary(n);
      const KakDecomposition kak = kak_decompose(u);
      check_valid(u, kak);
    }
  }
}

TEST_CASE("engineered degenerate middle factors decompose") {
  SUBCASE("two-fold degeneracies") {
    RealVector phases(4);
    phases << 0.8, 0.8, -1.4, -1.4;
    const Matrix u = assemble(random_special_orthogonal(4), phases,
                              random_special_orthogonal(4));
    check_valid(u, kak_decompose(u));
  }
  SUBCASE("three-fold degeneracy") {
    RealVector phases(4);
    phases << 0.5, 0.5, 0.5, -2.0;
    const Matrix u = assemble(random_special_orthogonal(4), phases,
                              random_special_orthogonal(4));
    check_valid(u, kak_decompose(u));
  }
  SUBCASE("fully degenerate: scalar times orthogonal") {
    RealVector phases = RealVector::Constant(4, 0.9);
    const Matrix u = assemble(random_special_orthogonal(4), phases,
                              random_special_orthogonal(4));
    check_valid(u, kak_decompose(u));
  }
  SUBCASE("phases straddling the wrap point") {
    RealVector phases(4);
    const double pi = kTwoPi / 2.0;
    phases << pi - 1e-3, -pi + 1e-3, pi - 1e-3, 0.1;
    const Matrix u = assemble(random_special_orthogonal(4), phases,
                              random_special_orthogonal(4));
    check_valid(u, kak_decompose(u));
  }
}

TEST_CASE("is_special_orthogonal classifies matrices") {
  CHECK(is_special_orthogonal(RealMatrix::Identity(4, 4), 1e-12));
  CHECK(is_special_orthogonal(random_special_orthogonal(5), 1e-10));

  RealMatrix reflection = RealMatrix::Identity(4, 4);
  reflection(0, 0) = -1.0;  // orthogonal but det = -1
  CHECK_FALSE(is_special_orthogonal(reflection, 1e-10));

  RealMatrix scaled = 1.5 * RealMatrix::Identity(4, 4);
  CHECK_FALSE(is_special_orthogonal(scaled, 1e-10));

  RealMatrix nearly = RealMatrix::Identity(3, 3);
  nearly(0, 1) = 5e-12;
  CHECK(is_special_orthogonal(nearly, 1e-10));
}

TEST_CASE("non-unitary inputs are rejected") {
  CHECK_THROWS_AS(kak_decompose(2.0 * Matrix::Identity(4, 4)), std::invalid_argument);
  Matrix rect = Matrix::Zero(3, 4);
  CHECK_THROWS_AS(kak_decompose(rect), std::invalid_argument);
}

TEST_CASE("reconstruction is exact on a long random battery") {
  double worst = 0.0;
  for (int trial = 0; trial < 120; ++trial) {
    const Matrix u = haar_unitary(4);
    const KakDecomposition kak = kak_decompose(u);
    worst = std::max(worst, (kak.reconstruct() - u).norm());
    CHECK(is_special_orthogonal(kak.k1, 1e-10));
    CHECK(is_special_orthogonal(kak.k2, 1e-10));
  }
  CHECK(worst <= 1e-9);
}
