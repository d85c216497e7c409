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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wstar/errors.hpp"
#include "wstar/prodsys.hpp"

namespace wstar {

/**
 * An operator on the top level of a truncated limit.
 *
 * `level` is the support level m: the operator equals kappa_m a kappa_m* for
 * an operator a on H(m). A level-preserving operator instead maps every
 * kappa_j H(j), j >= level, into itself (the identity is the main example).
 */
struct TruncOp {
  Mat op;
  int level = 0;
  bool level_preserving = false;
};

TruncOp operator*(const TruncOp& a, const TruncOp& b);
TruncOp operator+(const TruncOp& a, const TruncOp& b);
TruncOp adjoint(const TruncOp& a);
TruncOp scaled(const TruncOp& a, cplx c);

/** A unit sampled on the grid k delta, k = 0..n, with lambda_k in H(k). */
struct GridUnit {
  std::vector<Vec> vectors;
};

/** A cocycle on the grid; values[k] is w_{k delta}. */
struct Cocycle {
  std::vector<TruncOp> values;
};

/**
 * Levels H(k) = H((delta, ..., delta)) for k = 0..n with the embeddings
 * b_{k,j}(xi) = U_{k-j,j}(xi((k-j) delta) phi^{-1/2} xi). The top level H(n)
 * stands in for the inductive limit and kappa_k = b_{n,k}.
 */
class TruncatedLimit {
 public:
  /** Uses the distinguished unit of `system` unless `unit` is given. */
  TruncatedLimit(ProductSystemPtr system, Rational delta, int levels, std::optional<Unit> unit = std::nullopt);

  const ProductSystem& system() const { return *system_; }
  const StandardForm& standard_form() const { return system_->standard_form(); }
  const Rational& delta() const { return delta_; }
  int levels() const { return levels_; }
  Rational horizon() const { return delta_ * static_cast<std::int64_t>(levels_); }

  Partition level_partition(int k) const { return Partition::uniform(delta_, k); }
  int dim(int k) const { return dims_[k]; }
  int top_dim() const { return dims_[levels_]; }
  const Vec& unit_vector(int k) const { return units_[k]; }
  /** b_{k,j} : H(j) -> H(k). */
  const Mat& embedding(int k, int j) const;
  const Mat& kappa(int k) const { return embedding(levels_, k); }

  /** Grid index of t; throws TruncationError when t is off the grid or beyond the horizon. */
  int grid_index(const Rational& t) const;

  TruncOp identity() const;
  /** pi(x) = kappa_0 x kappa_0*. */
  TruncOp represent(const Mat& x) const;
  /** b_{n,j}* a b_{n,j}; requires j >= a.level. */
  Mat compress(const TruncOp& a, int j) const;
  /** theta_{k delta}(a); throws TruncationError if k + a.level > n. */
  TruncOp dilate(int k, const TruncOp& a) const;
  TruncOp dilate(const Rational& t, const TruncOp& a) const { return dilate(grid_index(t), a); }

  /** max || b_{k,j} b_{j,i} - b_{k,i} || over i <= j <= k. */
  double composition_defect() const;
  /** max over embeddings of isometry and right linearity defects. */
  double embedding_defect() const;

 private:
  ProductSystemPtr system_;
  Rational delta_;
  int levels_;
  std::vector<int> dims_;
  std::vector<Vec> units_;
  std::vector<std::vector<Mat>> embeddings_;
  std::vector<Mat> sandwich_left_;
  std::vector<Mat> sandwich_right_;
};

/** || kappa_0* theta_k(pi(x)) kappa_0 - t_k(x) || as operators on L^2(M). */
double compression_defect(const TruncatedLimit& tl, const CpMap& t_k, int k, const Mat& x);
/** || p theta_k(pi(x)) p - pi(t_k(x)) ||. */
double corner_defect(const TruncatedLimit& tl, const CpMap& t_k, int k, const Mat& x);

struct MinimalityReport {
  int span_rank = 0;
  int dim = 0;
  bool full = false;
  std::string sampling;
};

/**
 * Span of theta_{j delta}(pi(x_1)) ... theta_{delta}(pi(x_j)) kappa_0 phi^{1/2} y over
 * j = 0..n and x_i, y drawn from `basis_indices` (all matrix units when empty).
 */
MinimalityReport minimality_evidence(const TruncatedLimit& tl, const std::vector<int>& basis_indices = {});

/**
 * Distance between the orbit vector theta_{j delta}(pi(x_1)) ... theta_delta(pi(x_j)) kappa_0 phi^{1/2} y
 * and kappa_j of the word (x_1 (x) phi^{1/2}) ... (x_j (x) phi^{1/2} y).
 */
double orbit_formula_defect(const TruncatedLimit& tl, const std::vector<Mat>& xs, const Mat& y);

struct ContinuityEntry {
  int k = 0;
  int basis = 0;
  double value = 0.0;
};

/** || kappa_k(x xi(k delta)) - kappa_0(x phi^{1/2}) || for k = 1..n and every matrix unit x. */
std::vector<ContinuityEntry> continuity_profile(const TruncatedLimit& tl);

GridUnit grid_unit_from(const TruncatedLimit& tl, const Unit& unit);
/** The distinguished unit of the truncation. */
GridUnit canonical_grid_unit(const TruncatedLimit& tl);
/** lambda_k = U(eta phi^{-1/2} ... phi^{-1/2} eta) for eta in H(1). */
GridUnit grid_unit_from_generator(const TruncatedLimit& tl, const Vec& eta);
GridUnit scale_grid_unit(const GridUnit& unit, cplx c);
/** max || U_{j,k}(lambda_j phi^{-1/2} lambda_k) - lambda_{j+k} ||. */
double grid_unit_factorization_defect(const TruncatedLimit& tl, const GridUnit& unit);
/** max_k || pi(lambda_k)* pi(lambda_k) ||. */
double grid_unit_norm(const TruncatedLimit& tl, const GridUnit& unit);

/** w_k = pi(kappa_k lambda_k) pi(kappa_0 phi^{1/2})*. */
Cocycle cocycle_from_unit(const TruncatedLimit& tl, const GridUnit& unit);
/** lambda_k = kappa_k* w_k kappa_0 phi^{1/2}. */
GridUnit unit_from_cocycle(const TruncatedLimit& tl, const Cocycle& w);

/** max over j + k <= n of || w_{j+k} - theta_k(w_j) w_k ||. */
double cocycle_law_defect(const TruncatedLimit& tl, const Cocycle& w);
/** max_k || kappa_k kappa_k* w_k kappa_k kappa_k* - w_k ||. */
double adaptedness_defect(const TruncatedLimit& tl, const Cocycle& w);
double cocycle_norm(const Cocycle& w);
/** max_k || kappa_0* w_k* w_k kappa_0 - 1 ||. */
double corner_isometry_defect(const TruncatedLimit& tl, const Cocycle& w);

double unit_distance(const GridUnit& a, const GridUnit& b);
double cocycle_distance(const Cocycle& a, const Cocycle& b);

}  // namespace wstar
