// Copyright 2026 The wstar Authors
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

#include "wstar/dilation.hpp"

#include <algorithm>
#include <cmath>

#include "wstar/errors.hpp"

namespace wstar {

TruncOp operator*(const TruncOp& a, const TruncOp& b) {
  return TruncOp{a.op * b.op, std::max(a.level, b.level), a.level_preserving && b.level_preserving};
}

TruncOp operator+(const TruncOp& a, const TruncOp& b) {
  return TruncOp{a.op + b.op, std::max(a.level, b.level), a.level_preserving && b.level_preserving};
}

TruncOp adjoint(const TruncOp& a) { return TruncOp{a.op.adjoint(), a.level, a.level_preserving}; }

TruncOp scaled(const TruncOp& a, cplx c) { return TruncOp{c * a.op, a.level, a.level_preserving}; }

TruncatedLimit::TruncatedLimit(ProductSystemPtr system, Rational delta, int levels, std::optional<Unit> unit)
    : system_(std::move(system)), delta_(delta), levels_(levels) {
  if (!system_) throw DomainError("truncated limit needs a product system");
  if (delta_ <= Rational(0)) throw DomainError("grid step must be positive");
  if (levels_ < 1) throw DomainError("truncation needs at least one level");
  dims_.resize(levels_ + 1);
  units_.resize(levels_ + 1);
  for (int k = 0; k <= levels_; ++k) {
    const Partition p = level_partition(k);
    dims_[k] = system_->fiber(p)->dim();
    if (k == 0) {
      units_[k] = standard_form().cyclic();
    } else if (unit) {
      units_[k] = unit_vector_at(*system_, *unit, delta_ * static_cast<std::int64_t>(k), p);
    } else {
      units_[k] = system_->unit(p);
    }
  }
  sandwich_left_.resize(levels_ + 1);
  sandwich_right_.resize(levels_ + 1);
  for (int k = 1; k <= levels_; ++k) {
    const Partition q = level_partition(levels_ - k);
    const Partition p = level_partition(k);
    const auto f = system_->fusion(q, p);
    const Mat& u = system_->product(q, p);
    sandwich_left_[k] = u * f->quotient;
    sandwich_right_[k] = f->lift * u.adjoint();
  }
  embeddings_.resize(levels_ + 1);
  for (int k = 0; k <= levels_; ++k) {
    embeddings_[k].resize(k + 1);
    for (int j = 0; j <= k; ++j) {
      if (j == k) {
        embeddings_[k][j] = Mat::Identity(dims_[k], dims_[k]);
        continue;
      }
      const Partition q = level_partition(k - j);
      const Partition p = level_partition(j);
      const auto f = system_->fusion(q, p);
      Mat xi(dims_[k - j], 1);
      xi.col(0) = units_[k - j];
      const Mat id = Mat::Identity(dims_[j], dims_[j]);
      embeddings_[k][j] = system_->product(q, p) * f->quotient * kron(xi, id);
    }
  }
}

const Mat& TruncatedLimit::embedding(int k, int j) const {
  if (k < 0 || k > levels_ || j < 0 || j > k) throw DomainError("embedding index out of range");
  return embeddings_[k][j];
}

int TruncatedLimit::grid_index(const Rational& t) const {
  if (t < Rational(0)) throw DomainError("negative time");
  const Rational q = t / delta_;
  if (q.denominator() != 1)
    throw TruncationError("time " + to_string(t) + " is not on the grid of step " + to_string(delta_),
                          to_string(horizon()));
  if (q.numerator() > levels_)
    throw TruncationError("time " + to_string(t) + " exceeds the horizon; max admissible t = " +
                              to_string(horizon()),
                          to_string(horizon()));
  return static_cast<int>(q.numerator());
}

TruncOp TruncatedLimit::identity() const { return TruncOp{Mat::Identity(top_dim(), top_dim()), 0, true}; }

TruncOp TruncatedLimit::represent(const Mat& x) const {
  const Mat& k0 = kappa(0);
  return TruncOp{k0 * standard_form().algebra().left_mult(x) * k0.adjoint(), 0, false};
}

Mat TruncatedLimit::compress(const TruncOp& a, int j) const {
  if (j < a.level && !a.level_preserving) throw DomainError("compression below the support level");
  const Mat& b = kappa(j);
  return b.adjoint() * a.op * b;
}

TruncOp TruncatedLimit::dilate(int k, const TruncOp& a) const {
  if (k < 0) throw DomainError("negative dilation time");
  if (k == 0) return a;
  const int needed = a.level_preserving ? k : a.level + k;
  if (needed > levels_) {
    const int max_k = a.level_preserving ? levels_ : levels_ - a.level;
    const Rational max_t = delta_ * static_cast<std::int64_t>(max_k);
    throw TruncationError("dilation by " + to_string(delta_ * static_cast<std::int64_t>(k)) +
                              " of an operator at level " + std::to_string(a.level) +
                              " leaves the truncation; max admissible t = " + to_string(max_t),
                          to_string(max_t));
  }
  const Mat inner = compress(a, levels_ - k);
  const Mat& right = sandwich_right_[k];
  const Eigen::Index dk = dims_[k];
  Mat mid = Mat::Zero(right.rows(), right.cols());
  for (Eigen::Index i = 0; i < inner.rows(); ++i)
    for (Eigen::Index j = 0; j < inner.cols(); ++j)
      if (inner(i, j) != cplx(0.0)) mid.middleRows(i * dk, dk) += inner(i, j) * right.middleRows(j * dk, dk);
  const Mat op = sandwich_left_[k] * mid;
  return TruncOp{op, a.level_preserving ? a.level : a.level + k, a.level_preserving};
}

double TruncatedLimit::composition_defect() const {
  double worst = 0.0;
  for (int k = 0; k <= levels_; ++k)
    for (int j = 0; j <= k; ++j)
      for (int i = 0; i <= j; ++i)
        worst = std::max(worst, op_norm(embedding(k, j) * embedding(j, i) - embedding(k, i)));
  return worst;
}

double TruncatedLimit::embedding_defect() const {
  const Algebra& alg = standard_form().algebra();
  double worst = 0.0;
  for (int k = 0; k <= levels_; ++k) {
    const BimodulePtr hk = system_->fiber(level_partition(k));
    for (int j = 0; j <= k; ++j) {
      const Mat& b = embedding(k, j);
      worst = std::max(worst, op_norm(b.adjoint() * b - Mat::Identity(dims_[j], dims_[j])));
      const BimodulePtr hj = system_->fiber(level_partition(j));
      for (int e = 0; e < alg.dim(); ++e)
        worst = std::max(worst, op_norm(b * hj->right[e] - hk->right[e] * b));
    }
  }
  return worst;
}

double compression_defect(const TruncatedLimit& tl, const CpMap& t_k, int k, const Mat& x) {
  const TruncOp th = tl.dilate(k, tl.represent(x));
  const Mat& k0 = tl.kappa(0);
  const Mat lhs = k0.adjoint() * th.op * k0;
  return op_norm(lhs - tl.standard_form().algebra().left_mult(t_k(x)));
}

double corner_defect(const TruncatedLimit& tl, const CpMap& t_k, int k, const Mat& x) {
  const TruncOp th = tl.dilate(k, tl.represent(x));
  const Mat& k0 = tl.kappa(0);
  const Mat p = k0 * k0.adjoint();
  return op_norm(p * th.op * p - tl.represent(t_k(x)).op);
}

MinimalityReport minimality_evidence(const TruncatedLimit& tl, const std::vector<int>& basis_indices) {
  const Algebra& alg = tl.standard_form().algebra();
  std::vector<int> idx = basis_indices;
  if (idx.empty())
    for (int e = 0; e < alg.dim(); ++e) idx.push_back(e);
  std::vector<TruncOp> reps;
  for (int e : idx) reps.push_back(tl.represent(alg.basis(e)));

  Mat level(tl.top_dim(), static_cast<int>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) level.col(c) = tl.kappa(0) * tl.standard_form().left_embed(alg.basis(idx[c]));
  level = column_span(level);
  Mat all = level;
  for (int i = 1; i <= tl.levels(); ++i) {
    std::vector<Mat> images;
    for (const TruncOp& r : reps) images.push_back(tl.dilate(i, r).op * level);
    Mat next(tl.top_dim(), level.cols() * static_cast<int>(images.size()));
    for (std::size_t c = 0; c < images.size(); ++c) next.middleCols(c * level.cols(), level.cols()) = images[c];
    level = column_span(next);
    Mat joined(tl.top_dim(), all.cols() + level.cols());
    joined << all, level;
    all = column_span(joined);
  }
  MinimalityReport rep;
  rep.span_rank = static_cast<int>(all.cols());
  rep.dim = tl.top_dim();
  rep.full = rep.span_rank == rep.dim;
  rep.sampling = idx.size() == static_cast<std::size_t>(alg.dim())
                     ? "exact span over all matrix units, words of length 0.." + std::to_string(tl.levels())
                     : "span over " + std::to_string(idx.size()) + " matrix units, words of length 0.." +
                           std::to_string(tl.levels());
  return rep;
}

namespace {

Unit grid_sample_unit(const TruncatedLimit& tl) {
  Unit u;
  u.samples[tl.delta()] = UnitSample{tl.level_partition(1), tl.unit_vector(1)};
  return u;
}

}  // namespace

double orbit_formula_defect(const TruncatedLimit& tl, const std::vector<Mat>& xs, const Mat& y) {
  const int j = static_cast<int>(xs.size());
  if (j > tl.levels()) throw TruncationError("word longer than the truncation", to_string(tl.horizon()));
  Vec lhs = tl.kappa(0) * tl.standard_form().left_embed(y);
  for (int i = 1; i <= j; ++i) lhs = tl.dilate(i, tl.represent(xs[j - i])).op * lhs;
  if (j == 0) return 0.0;
  Partition level;
  const Vec w = unit_word(tl.system(), grid_sample_unit(tl), tl.level_partition(j), xs, y, &level);
  const Vec rhs = tl.kappa(j) * tl.system().refine(tl.level_partition(j), level) * w;
  return (lhs - rhs).norm();
}

std::vector<ContinuityEntry> continuity_profile(const TruncatedLimit& tl) {
  const StandardForm& sf = tl.standard_form();
  const Algebra& alg = sf.algebra();
  std::vector<ContinuityEntry> out;
  for (int k = 1; k <= tl.levels(); ++k) {
    const BimodulePtr hk = tl.system().fiber(tl.level_partition(k));
    for (int e = 0; e < alg.dim(); ++e) {
      const Vec a = tl.kappa(k) * (hk->left[e] * tl.unit_vector(k));
      const Vec b = tl.kappa(0) * sf.right_embed(alg.basis(e));
      out.push_back(ContinuityEntry{k, e, (a - b).norm()});
    }
  }
  return out;
}

GridUnit grid_unit_from(const TruncatedLimit& tl, const Unit& unit) {
  GridUnit g;
  g.vectors.push_back(tl.standard_form().cyclic());
  for (int k = 1; k <= tl.levels(); ++k)
    g.vectors.push_back(
        unit_vector_at(tl.system(), unit, tl.delta() * static_cast<std::int64_t>(k), tl.level_partition(k)));
  return g;
}

GridUnit canonical_grid_unit(const TruncatedLimit& tl) {
  GridUnit g;
  for (int k = 0; k <= tl.levels(); ++k) g.vectors.push_back(tl.unit_vector(k));
  return g;
}

GridUnit grid_unit_from_generator(const TruncatedLimit& tl, const Vec& eta) {
  if (eta.size() != tl.dim(1)) throw DomainError("generator must lie in H(delta)");
  GridUnit g;
  g.vectors.push_back(tl.standard_form().cyclic());
  g.vectors.push_back(eta);
  for (int k = 2; k <= tl.levels(); ++k) {
    const Partition q = tl.level_partition(k - 1);
    const Partition p = tl.level_partition(1);
    g.vectors.push_back(tl.system().product(q, p) * tl.system().fusion(q, p)->fuse(g.vectors[k - 1], eta));
  }
  return g;
}

GridUnit scale_grid_unit(const GridUnit& unit, cplx c) {
  GridUnit g = unit;
  for (std::size_t k = 1; k < g.vectors.size(); ++k) g.vectors[k] *= std::pow(c, static_cast<double>(k));
  return g;
}

double grid_unit_factorization_defect(const TruncatedLimit& tl, const GridUnit& unit) {
  double worst = 0.0;
  for (int j = 1; j <= tl.levels(); ++j)
    for (int k = 1; j + k <= tl.levels(); ++k) {
      const Partition q = tl.level_partition(j);
      const Partition p = tl.level_partition(k);
      const Vec v = tl.system().product(q, p) * tl.system().fusion(q, p)->fuse(unit.vectors[j], unit.vectors[k]);
      worst = std::max(worst, (v - unit.vectors[j + k]).norm());
    }
  return worst;
}

double grid_unit_norm(const TruncatedLimit& tl, const GridUnit& unit) {
  double worst = 0.0;
  for (int k = 0; k <= tl.levels(); ++k) {
    const Mat p = pi_phi(tl.standard_form(), *tl.system().fiber(tl.level_partition(k)), unit.vectors[k]);
    worst = std::max(worst, op_norm(p.adjoint() * p));
  }
  return worst;
}

Cocycle cocycle_from_unit(const TruncatedLimit& tl, const GridUnit& unit) {
  Cocycle w;
  for (int k = 0; k <= tl.levels(); ++k) {
    const Mat p = pi_phi(tl.standard_form(), *tl.system().fiber(tl.level_partition(k)), unit.vectors[k]);
    w.values.push_back(TruncOp{tl.kappa(k) * p * tl.kappa(0).adjoint(), k, false});
  }
  return w;
}

GridUnit unit_from_cocycle(const TruncatedLimit& tl, const Cocycle& w) {
  GridUnit g;
  const Vec base = tl.kappa(0) * tl.standard_form().cyclic();
  for (int k = 0; k <= tl.levels(); ++k) g.vectors.push_back(tl.kappa(k).adjoint() * (w.values[k].op * base));
  return g;
}

double cocycle_law_defect(const TruncatedLimit& tl, const Cocycle& w) {
  double worst = 0.0;
  for (int j = 0; j <= tl.levels(); ++j)
    for (int k = 0; j + k <= tl.levels(); ++k) {
      const TruncOp rhs = tl.dilate(k, w.values[j]) * w.values[k];
      worst = std::max(worst, op_norm(w.values[j + k].op - rhs.op));
    }
  return worst;
}

double adaptedness_defect(const TruncatedLimit& tl, const Cocycle& w) {
  double worst = 0.0;
  for (int k = 0; k <= tl.levels(); ++k) {
    const Mat p = tl.kappa(k) * tl.kappa(k).adjoint();
    worst = std::max(worst, op_norm(p * w.values[k].op * p - w.values[k].op));
  }
  return worst;
}

double cocycle_norm(const Cocycle& w) {
  double worst = 0.0;
  for (const TruncOp& v : w.values) worst = std::max(worst, op_norm(v.op));
  return worst;
}

double corner_isometry_defect(const TruncatedLimit& tl, const Cocycle& w) {
  double worst = 0.0;
  const Mat& k0 = tl.kappa(0);
  const int d = tl.dim(0);
  for (const TruncOp& v : w.values)
    worst = std::max(worst, op_norm(k0.adjoint() * v.op.adjoint() * v.op * k0 - Mat::Identity(d, d)));
  return worst;
}

double unit_distance(const GridUnit& a, const GridUnit& b) {
  if (a.vectors.size() != b.vectors.size()) throw DomainError("grid units of different length");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.vectors.size(); ++k) worst = std::max(worst, (a.vectors[k] - b.vectors[k]).norm());
  return worst;
}

double cocycle_distance(const Cocycle& a, const Cocycle& b) {
  if (a.values.size() != b.values.size()) throw DomainError("cocycles of different length");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) worst = std::max(worst, op_norm(a.values[k].op - b.values[k].op));
  return worst;
}

}  // namespace wstar
