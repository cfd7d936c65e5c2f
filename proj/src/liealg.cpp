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

#include "qoct/liealg.hpp"

#include <algorithm>
#include <stdexcept>

namespace qoct {

namespace {

constexpr Complex kI{0.0, 1.0};

/// Real Hilbert-Schmidt inner product; real linear combinations preserve
/// anti-Hermiticity, so the algebra is treated as a real vector space.
double hs_inner(const Matrix& a, const Matrix& b) {
  return a.conjugate().cwiseProduct(b).sum().real();
}

/// Orthonormalizes `cand` against `basis` (modified Gram-Schmidt, two passes)
/// and appends it when the residual exceeds tol relative to the candidate
/// norm. Returns true when a new direction was admitted.
bool admit(std::vector<Matrix>& basis, Matrix cand, double tol) {
  const double norm0 = cand.norm();
  if (norm0 < 1e-14) return false;
  for (int pass = 0; pass < 2; ++pass) {
    for (const Matrix& e : basis) cand -= hs_inner(e, cand) * e;
  }
  const double res = cand.norm();
  if (res <= tol * norm0) return false;
  basis.push_back(cand / res);
  return true;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace

LieClosure lie_closure(const std::vector<Matrix>& generators, double tol, int max_dim) {
  if (generators.empty()) throw std::invalid_argument("need at least one generator");
  const int d = static_cast<int>(generators.front().rows());
  for (const Matrix& g : generators) {
    if (g.rows() != d || g.cols() != d) {
      throw std::invalid_argument("generator dimension mismatch");
    }
    if ((g - g.adjoint()).norm() > 1e-10 * std::max(1.0, g.norm())) {
      throw std::invalid_argument("generators must be Hermitian");
    }
  }
  if (max_dim <= 0) max_dim = d * d;

  LieClosure out;
  for (const Matrix& g : generators) {
    if (static_cast<int>(out.basis.size()) >= max_dim) {
      out.truncated = true;
      break;
    }
    admit(out.basis, kI * g, tol);
  }

  // Every unordered pair is bracketed exactly once; elements admitted during
  // the sweep extend the frontier and get their own turns later.
  for (size_t b = 1; b < out.basis.size() && !out.truncated; ++b) {
    for (size_t a = 0; a < b; ++a) {
      if (static_cast<int>(out.basis.size()) >= max_dim) {
        out.truncated = true;
        break;
      }
      admit(out.basis, commutator(out.basis[a], out.basis[b]), tol);
    }
  }
  out.dimension = static_cast<int>(out.basis.size());
  return out;
}

int diagonal_reachability(const OperatorSet& ops) {
  const int n = ops.model.qudit.n_levels;
  const int env = ops.model.env_dim();
  const Matrix d_mat = ops.control_generator();
  const LieClosure closure = lie_closure({ops.drift, d_mat}, 1e-8, 0);
  if (closure.truncated) {
    throw std::runtime_error("diagonal_reachability: closure truncated, rank indeterminate");
  }

  // Smallest Lie ideal of the closure containing the control generator: only
  // directions inside this ideal can be steered independently of the drift's
  // own flow, matching the single-direction no-defect case.
  std::vector<Matrix> ideal;
  admit(ideal, kI * d_mat, 1e-8);
  for (size_t u = 0; u < ideal.size(); ++u) {
    if (static_cast<int>(ideal.size()) > closure.dimension) break;  // safety
    const Matrix elem = ideal[u];  // copy: `ideal` reallocates while growing
    for (const Matrix& v : closure.basis) {
      admit(ideal, commutator(v, elem), 1e-8);
    }
  }

  // Project each ideal element onto traceless diagonals of the qudit factor
  // (all defects in the ground state); the rank of the stack is the number of
  // independently reachable diagonal directions.
  RealMatrix stack(static_cast<int>(ideal.size()), n);
  for (size_t i = 0; i < ideal.size(); ++i) {
    RealVector p(n);
    for (int lvl = 0; lvl < n; ++lvl) p(lvl) = ideal[i](lvl * env, lvl * env).imag();
    stack.row(i) = (p.array() - p.mean()).matrix().transpose();
  }
  Eigen::JacobiSVD<RealMatrix> svd(stack);
  const RealVector sigma = svd.singularValues();
  const double cutoff = std::max(1e-6 * (sigma.size() > 0 ? sigma(0) : 0.0), 1e-12);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace qoct
