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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wstar/prodsys.hpp"

namespace wstar {

/**
 * A semigroup of unital *-endomorphisms theta_t(x) = u_t* x u_t, where u_t is a
 * unitary on C^N normalizing the block algebra. Block permutations are
 * allowed, so theta_t need not be inner.
 */
class E0Semigroup {
 public:
  using UnitaryFamily = std::function<Mat(const Rational&)>;

  /** u_t = exp(itK) with K Hermitian in the algebra. */
  static E0Semigroup inner(const Algebra& algebra, const Mat& k);
  /** u_{k delta} = v^k; only defined on the grid of step delta. */
  static E0Semigroup stepped(const Algebra& algebra, const Rational& delta, const Mat& v);
  /** An arbitrary normalizing unitary family; no semigroup law is assumed. */
  static E0Semigroup implemented(const Algebra& algebra, UnitaryFamily family, std::string label);
  static E0Semigroup identity(const Algebra& algebra);

  const Algebra& algebra() const { return algebra_; }
  const std::string& label() const { return label_; }

  /** The implementing unitary u_t. */
  Mat unitary(const Rational& t) const;
  /** theta_t as a map on the algebra; throws DomainError off the domain. */
  CpMap evaluate(const Rational& t) const;
  CpFamily family() const;

 private:
  E0Semigroup(Algebra algebra, UnitaryFamily family, std::string label);

  Algebra algebra_;
  UnitaryFamily family_;
  std::string label_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/** Max over grid times of the *-endomorphism and unitality defects. */
double e0_endomorphism_defect(const E0Semigroup& theta, const std::vector<Rational>& times);
/** Max over sampled s, t with s + t sampled of || theta_s theta_t - theta_{s+t} ||. */
double e0_semigroup_defect(const E0Semigroup& theta, const std::vector<Rational>& times);

/**
 * Twisted cells: every H(p) is L^2(M) with left action theta_{|p|}, the
 * product is xi phi^{-1/2} eta -> theta_{|p|}(xi rho^{-1/2}) eta and the unit is
 * phi^{1/2} at every level.
 */
class TwistedSystem : public ProductSystem {
 public:
  TwistedSystem(StandardForm sf, E0Semigroup theta);
  const E0Semigroup& semigroup() const { return theta_; }

 protected:
  BimodulePtr build_fiber(const Partition& p) const override;
  Mat build_product(const Partition& q, const Partition& p) const override;
  Mat build_refine(const Partition& fine, const Partition& coarse) const override;
  Vec build_unit(const Partition& p) const override;

 private:
  E0Semigroup theta_;
};

struct CanonicalIso {
  Partition partition;
  BimoduleMap map;
  MapReport report;
  /** || u(xi^theta(p)) - phi^{1/2} ||. */
  double unit_defect = 0.0;
};

/**
 * The unitary from the cells of theta at level p onto the twisted cell:
 * (x_1 (x) y_1 phi^{1/2}) ... (x_n (x) y_n phi^{1/2}) ->
 * theta_{t_n}(theta_{t_{n-1}}( ... theta_{t_1}(x_1) y_1 x_2 ...) y_{n-1} x_n) y_n phi^{1/2}.
 */
CanonicalIso canonical_iso(const CellSystem& cells, const TwistedSystem& twisted, const Partition& p,
                           double tol = 1e-10);

struct EquivalenceStep {
  Rational t;
  int intertwiner_dim = 0;
  double intertwining_defect = 0.0;
  double conjugation_defect = 0.0;
  double unitarity_defect = 0.0;
  double backward_defect = 0.0;
};

struct EquivalenceReport {
  bool equivalent = false;
  std::optional<Rational> failing_time;
  std::string reason;
  /** w_{k delta} for k = 0..n when a cocycle was found. */
  std::vector<Mat> cocycle;
  std::vector<EquivalenceStep> steps;
  double cocycle_law_defect = 0.0;
  /** max_k || w_{(k+1) delta} - w_{k delta} ||, reported only. */
  double continuity_modulus = 0.0;
};

/**
 * Searches for a unitary cocycle w for alpha with beta_t = w_t* alpha_t(.) w_t
 * on the grid k delta, k = 1..n. Intertwiners of the twisted cells are solved
 * exactly at every grid time; the gauge is fixed at delta by the intertwiner
 * nearest the identity (seeded random choices if that one is singular) and
 * propagated by the cocycle law.
 */
EquivalenceReport cocycle_equivalence(const StandardForm& sf, const E0Semigroup& alpha, const E0Semigroup& beta,
                                      const Rational& delta, int levels, std::uint64_t seed = 0,
                                      double tol = 1e-9);

/** Unitaries u_t on L^2(M) with u_t(beta_t(x) xi y) = alpha_t(x) u_t(xi) y; columns are vec(u) bases. */
std::vector<Mat> intertwiner_basis(const StandardForm& sf, const CpMap& alpha_t, const CpMap& beta_t,
                                   double tol = 1e-9);

/** || u(beta(x) xi y) - alpha(x) u(xi) y || over matrix units. */
double intertwining_defect(const StandardForm& sf, const CpMap& alpha_t, const CpMap& beta_t, const Mat& u);

struct UnitCocycle {
  std::map<Rational, Mat> values;
  /** max || theta_t(a_s) a_t - a_{s+t} || over sampled s, t. */
  double law_defect = 0.0;
};

/** a_t with xi(t) = a_t phi^{1/2} for a unit of the twisted system. */
UnitCocycle unit_to_cocycle(const StandardForm& sf, const E0Semigroup& theta, const std::map<Rational, Vec>& unit);

struct UnitOperators {
  std::map<Rational, Mat> values;
  double intertwining_defect = 0.0;
  double semigroup_defect = 0.0;
};

/** X_t(x phi^{1/2}) = theta_t(x) a_t phi^{1/2}; throws DomainError unless the state is tracial. */
UnitOperators unit_operator(const StandardForm& sf, const E0Semigroup& theta, const UnitCocycle& a);

}  // namespace wstar
