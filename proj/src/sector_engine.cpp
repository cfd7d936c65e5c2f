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

#include "qoct/sector_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace qoct {

namespace {

constexpr Complex kI{0.0, 1.0};

struct SparseEntry {
  int row, col;
  Complex value;
};

std::vector<SparseEntry> sparsify(const Matrix& m, double tol = 0.0) {
  std::vector<SparseEntry> out;
  for (int c = 0; c < m.cols(); ++c) {
    for (int r = 0; r < m.rows(); ++r) {
      if (std::abs(m(r, c)) > tol) out.push_back({r, c, m(r, c)});
    }
  }
  return out;
}

int swap_index(int idx, int n) { return (idx % n) * n + idx / n; }

}  // namespace

SectorEngine::SectorEngine(const OperatorSet& ops) {
  n_ = ops.model.qudit.n_levels;
  env_ = ops.model.env_dim();
  d_ = ops.dim();
  if (ops.drift.rows() != d_ || ops.control_diag.size() != d_) {
    throw std::invalid_argument("SectorEngine: inconsistent operator dimensions");
  }
  const Eigen::VectorXi& exc = ops.excitation;
  const int max_exc = n_ - 1;

  // Enumerate retained Liouville coordinates and group them by charge q.
  Eigen::MatrixXi coord_of = Eigen::MatrixXi::Constant(d_, d_, -1);
  Eigen::MatrixXi sector_of = Eigen::MatrixXi::Constant(d_, d_, -1);
  std::vector<int> charge_list;
  auto sector_index = [&](int q) {
    for (size_t s = 0; s < charge_list.size(); ++s) {
      if (charge_list[s] == q) return static_cast<int>(s);
    }
    charge_list.push_back(q);
    sectors_.emplace_back();
    sectors_.back().q = q;
    return static_cast<int>(charge_list.size()) - 1;
  };
  for (int c = 0; c < d_; ++c) {
    for (int r = 0; r < d_; ++r) {
      if (exc(r) > max_exc || exc(c) > max_exc) continue;
      const int q = exc(r) - exc(c);
      if (q < 0) continue;  // conjugate of the +q sector; not stored
      const int s = sector_index(q);
      coord_of(r, c) = static_cast<int>(sectors_[s].rows.size());
      sector_of(r, c) = s;
      sectors_[s].rows.push_back(r);
      sectors_[s].cols.push_back(c);
    }
  }
  std::sort(sectors_.begin(), sectors_.end(),
            [](const Sector& a, const Sector& b) { return a.q < b.q; });
  // Re-derive coordinate maps after sorting sectors by charge.
  for (size_t s = 0; s < sectors_.size(); ++s) {
    Sector& sec = sectors_[s];
    sec.size = static_cast<int>(sec.rows.size());
    for (int i = 0; i < sec.size; ++i) {
      coord_of(sec.rows[i], sec.cols[i]) = i;
      sector_of(sec.rows[i], sec.cols[i]) = static_cast<int>(s);
    }
  }

  // Assemble the generator block of each sector column by column. Images of
  // |r><c| under the generator never raise row or column excitation, so they
  // stay inside the retained coordinate set, and they preserve q.
  const std::vector<SparseEntry> h_entries = sparsify(ops.drift, 0.0);
  std::vector<std::vector<SparseEntry>> h_by_col(d_), h_by_row(d_);
  for (const SparseEntry& e : h_entries) {
    h_by_col[e.col].push_back(e);
    h_by_row[e.row].push_back(e);
  }
  struct CollapsePair {
    std::vector<std::vector<SparseEntry>> a_by_col;  // A entries grouped by column
    Matrix ata;                                      // A^dag A
  };
  std::vector<CollapsePair> collapse;
  for (const Matrix& a : ops.collapse_ops) {
    CollapsePair cp;
    cp.a_by_col.resize(d_);
    for (const SparseEntry& e : sparsify(a, 0.0)) cp.a_by_col[e.col].push_back(e);
    cp.ata = a.adjoint() * a;
    collapse.push_back(std::move(cp));
  }

  auto scatter = [&](Sector& sec, int col_coord, int r, int c, Complex v) {
    const int coord = coord_of(r, c);
    if (coord < 0 || sector_of(r, c) != static_cast<int>(&sec - sectors_.data())) {
      throw std::invalid_argument(
          "SectorEngine: operators leave the excitation-sector structure");
    }
    sec.base(coord, col_coord) += v;
  };

  for (Sector& sec : sectors_) {
    sec.base = Matrix::Zero(sec.size, sec.size);
    sec.ctrl = Vector::Zero(sec.size);
    for (int i = 0; i < sec.size; ++i) {
      const int r = sec.rows[i];
      const int c = sec.cols[i];
      sec.ctrl(i) = -kI * (ops.control_diag(r) - ops.control_diag(c));
      // -i (H |r><c| - |r><c| H)
      for (const SparseEntry& e : h_by_col[r]) scatter(sec, i, e.row, c, -kI * e.value);
      for (const SparseEntry& e : h_by_row[c]) scatter(sec, i, r, e.col, kI * e.value);
      for (const CollapsePair& cp : collapse) {
        // A |r><c| A^dag
        for (const SparseEntry& er : cp.a_by_col[r]) {
          for (const SparseEntry& ec : cp.a_by_col[c]) {
            scatter(sec, i, er.row, ec.row, er.value * std::conj(ec.value));
          }
        }
        // -1/2 A^dag A |r><c|  and  -1/2 |r><c| A^dag A
        for (int rr = 0; rr < d_; ++rr) {
          const Complex v = cp.ata(rr, r);
          if (v != 0.0) scatter(sec, i, rr, c, -0.5 * v);
        }
        for (int cc = 0; cc < d_; ++cc) {
          const Complex v = cp.ata(c, cc);
          if (v != 0.0) scatter(sec, i, r, cc, -0.5 * v);
        }
      }
    }
  }

  // Channel plumbing: initial unit coordinates (columns) and readout scatter.
  sector_col_of_.resize(sectors_.size());
  for (int c0 = 0; c0 < n_ * n_; ++c0) {
    const int k = c0 % n_;
    const int l = c0 / n_;
    if (k - l < 0) continue;
    const int s = sector_of(k * env_, l * env_);
    sectors_[s].init.push_back({coord_of(k * env_, l * env_), c0});
    sector_col_of_[s].push_back(c0);
  }
  for (size_t s = 0; s < sectors_.size(); ++s) {
    Sector& sec = sectors_[s];
    for (int r0 = 0; r0 < n_ * n_; ++r0) {
      const int kp = r0 % n_;
      const int lp = r0 / n_;
      if (kp - lp != sec.q) continue;
      for (int tau = 0; tau < env_; ++tau) {
        const int gr = kp * env_ + tau;
        const int gc = lp * env_ + tau;
        if (exc(gr) > max_exc || exc(gc) > max_exc) continue;  // identically zero
        sec.extract.push_back({coord_of(gr, gc), r0});
      }
    }
  }
}

double SectorEngine::max_abs_generator() const {
  double m = 0.0;
  for (const Sector& sec : sectors_) {
    m = std::max(m, sec.base.cwiseAbs().maxCoeff());
  }
  return m;
}

std::vector<Matrix> SectorEngine::initial_columns() const {
  std::vector<Matrix> states;
  states.reserve(sectors_.size());
  for (const Sector& sec : sectors_) {
    Matrix x = Matrix::Zero(sec.size, static_cast<int>(sec.init.size()));
    for (size_t m = 0; m < sec.init.size(); ++m) x(sec.init[m].first, m) = 1.0;
    states.push_back(std::move(x));
  }
  return states;
}

void SectorEngine::fill_channel(const std::vector<Matrix>& states, Matrix& lambda) const {
  const int nn = n_ * n_;
  lambda = Matrix::Zero(nn, nn);
  for (size_t s = 0; s < sectors_.size(); ++s) {
    const Sector& sec = sectors_[s];
    for (size_t m = 0; m < sec.init.size(); ++m) {
      const int c0 = sec.init[m].second;
      for (const auto& [coord, r0] : sec.extract) {
        lambda(r0, c0) += states[s](coord, m);
      }
    }
  }
  // Negative-charge blocks are the entrywise conjugates of their positive
  // partners under the simultaneous index swap (k,l) -> (l,k).
  for (int c0 = 0; c0 < nn; ++c0) {
    const int q = c0 % n_ - c0 / n_;
    if (q >= 0) continue;
    const int c0s = swap_index(c0, n_);
    for (int r0 = 0; r0 < nn; ++r0) {
      if (r0 % n_ - r0 / n_ != q) continue;
      lambda(r0, c0) = std::conj(lambda(swap_index(r0, n_), c0s));
    }
  }
}

std::vector<Channel> SectorEngine::channel_samples(const PiecewiseControl& control,
                                                   const RealVector& times) const {
  if (control.n_slices < 1 || control.values.size() != control.n_slices) {
    throw std::invalid_argument("invalid control");
  }
  const double dt = control.dt();
  const double t_end = control.total_time;
  std::vector<Matrix> states = initial_columns();
  std::vector<Channel> out;
  out.reserve(times.size());
  double t_cur = 0.0;
  int slice = 0;
  for (Eigen::Index m = 0; m < times.size(); ++m) {
    double t = times(m);
    if (t < t_cur - 1e-9 || t > t_end + 1e-9) {
      throw std::invalid_argument("sample time outside [0, total_time] or unsorted");
    }
    t = std::min(t, t_end);
    while (t_cur < t - 1e-12) {
      const double slice_end = std::min((slice + 1) * dt, t_end);
      const double step_end = std::min(slice_end, t);
      const double h = step_end - t_cur;
      if (h > 1e-12) {
        const double delta = control.values(std::min(slice, control.n_slices - 1));
        for (size_t s = 0; s < sectors_.size(); ++s) {
          Matrix gen = sectors_[s].base;
          gen.diagonal() += delta * sectors_[s].ctrl;
          states[s] = ((gen * h).exp() * states[s]).eval();
        }
      }
      t_cur = step_end;
      if (t_cur >= slice_end - 1e-12 && slice < control.n_slices - 1) ++slice;
    }
    Channel ch;
    ch.system_dim = n_;
    fill_channel(states, ch.data);
    out.push_back(std::move(ch));
  }
  return out;
}

Channel SectorEngine::channel(const PiecewiseControl& control, double t) const {
  RealVector times(1);
  times(0) = t;
  return channel_samples(control, times).front();
}

std::vector<Matrix> SectorEngine::readout_columns(const Matrix& target) const {
  std::vector<Matrix> readout;
  readout.reserve(sectors_.size());
  for (const Sector& sec : sectors_) {
    Matrix w = Matrix::Zero(sec.size, static_cast<int>(sec.init.size()));
    for (size_t m = 0; m < sec.init.size(); ++m) {
      const int c0 = sec.init[m].second;
      const int k = c0 % n_;
      const int l = c0 / n_;
      for (const auto& [coord, r0] : sec.extract) {
        const int kp = r0 % n_;
        const int lp = r0 / n_;
        // vec(U E_kl U^dag)[r0] = U(k',k) * conj(U(l',l))
        w(coord, m) = target(kp, k) * std::conj(target(lp, l));
      }
    }
    readout.push_back(std::move(w));
  }
  return readout;
}

double SectorEngine::objective(const PiecewiseControl& control, const Matrix& target) const {
  if (target.rows() != n_ || target.cols() != n_) {
    throw std::invalid_argument("target dimension mismatch");
  }
  const double dt = control.dt();
  std::vector<Matrix> states = initial_columns();
  for (int j = 0; j < control.n_slices; ++j) {
    const double delta = control.values(j);
    for (size_t s = 0; s < sectors_.size(); ++s) {
      Matrix gen = sectors_[s].base;
      gen.diagonal() += delta * sectors_[s].ctrl;
      states[s] = ((gen * dt).exp() * states[s]).eval();
    }
  }
  const std::vector<Matrix> readout = readout_columns(target);
  double f_pro = 0.0;
  for (size_t s = 0; s < sectors_.size(); ++s) {
    const double weight = sectors_[s].q == 0 ? 1.0 : 2.0;
    f_pro += weight * readout[s].conjugate().cwiseProduct(states[s]).sum().real();
  }
  f_pro /= static_cast<double>(n_ * n_);
  const double f_avg = (n_ * f_pro + 1.0) / (n_ + 1.0);
  return 1.0 - f_avg;
}

std::pair<double, RealVector> SectorEngine::objective_gradient(
    const PiecewiseControl& control, const Matrix& target) const {
  if (target.rows() != n_ || target.cols() != n_) {
    throw std::invalid_argument("target dimension mismatch");
  }
  const int nt = control.n_slices;
  const double dt = control.dt();
  const double nn = static_cast<double>(n_ * n_);
  RealVector grad_fpro = RealVector::Zero(nt);
  double f_pro = 0.0;

  for (size_t s = 0; s < sectors_.size(); ++s) {
    const Sector& sec = sectors_[s];
    const double weight = sec.q == 0 ? 1.0 : 2.0;
    const int b = sec.size;
    const int m = static_cast<int>(sec.init.size());
    if (m == 0) continue;

    // Forward pass: per-slice propagator E_j, derivative block F_j, states X_j.
    std::vector<Matrix> xs(nt + 1), es(nt), fs(nt);
    xs[0] = Matrix::Zero(b, m);
    for (int col = 0; col < m; ++col) xs[0](sec.init[col].first, col) = 1.0;
    Matrix aug = Matrix::Zero(2 * b, 2 * b);
    for (int j = 0; j < nt; ++j) {
      Matrix gen = sec.base;
      gen.diagonal() += control.values(j) * sec.ctrl;
      aug.topLeftCorner(b, b) = gen * dt;
      aug.bottomRightCorner(b, b) = gen * dt;
      aug.topRightCorner(b, b).setZero();
      aug.topRightCorner(b, b).diagonal() = sec.ctrl * dt;
      const Matrix exp_aug = aug.exp();
      es[j] = exp_aug.topLeftCorner(b, b);
      fs[j] = exp_aug.topRightCorner(b, b);
      xs[j + 1] = es[j] * xs[j];
    }

    // Readout stack and objective contribution.
    Matrix w = Matrix::Zero(b, m);
    for (int col = 0; col < m; ++col) {
      const int c0 = sec.init[col].second;
      const int k = c0 % n_;
      const int l = c0 / n_;
      for (const auto& [coord, r0] : sec.extract) {
        w(coord, col) = target(r0 % n_, k) * std::conj(target(r0 / n_, l));
      }
    }
    f_pro += weight * w.conjugate().cwiseProduct(xs[nt]).sum().real();

    // Backward pass: grad_j = Re tr(Y_{j+1}^dag F_j X_{j-1}).
    Matrix y = w;
    for (int j = nt - 1; j >= 0; --j) {
      grad_fpro(j) +=
          weight * y.conjugate().cwiseProduct(fs[j] * xs[j]).sum().real() / nn;
      y = (es[j].adjoint() * y).eval();
    }
  }

  f_pro /= nn;
  const double error = 1.0 - (n_ * f_pro + 1.0) / (n_ + 1.0);
  const RealVector grad = -static_cast<double>(n_) / (n_ + 1.0) * grad_fpro;
  return {error, grad};
}

}  // namespace qoct
