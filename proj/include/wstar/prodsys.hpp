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
#include <mutex>
#include <string>
#include <vector>

#include "wstar/bimodule.hpp"
#include "wstar/partition.hpp"

namespace wstar {

/** Time-indexed family of maps, e.g. t -> T_t. */
using CpFamily = std::function<CpMap(const Rational&)>;

CpFamily family_of(const CpSemigroup& semigroup);

/**
 * A product system sampled at partition level: fibers H(p) for partitions p,
 * the product unitaries H(q) (x)^M H(p) -> H(q v p), refinement isometries
 * H(coarse) -> H(fine) and a distinguished unit. All results are cached;
 * public methods are safe to call from several threads.
 */
class ProductSystem {
 public:
  explicit ProductSystem(StandardForm sf);
  virtual ~ProductSystem() = default;
  ProductSystem(const ProductSystem&) = delete;
  ProductSystem& operator=(const ProductSystem&) = delete;

  const StandardForm& standard_form() const { return sf_; }
  const Algebra& algebra() const { return sf_.algebra(); }

  /** H(p); the empty partition gives L^2(M). */
  BimodulePtr fiber(const Partition& p) const;
  /** H(q) (x)^M H(p). */
  std::shared_ptr<const RelativeTensor> fusion(const Partition& q, const Partition& p) const;
  /** The unitary fusion(q, p) -> H(q v p). */
  Mat product(const Partition& q, const Partition& p) const;
  /** The isometry H(coarse) -> H(fine); throws OrderError unless fine refines coarse. */
  Mat refine(const Partition& fine, const Partition& coarse) const;
  /** The distinguished unit at time |p| written at level p. */
  Vec unit(const Partition& p) const;

 protected:
  virtual BimodulePtr build_fiber(const Partition& p) const = 0;
  virtual std::shared_ptr<const RelativeTensor> build_fusion(const Partition& q, const Partition& p) const;
  /** Called with q and p both non-empty. */
  virtual Mat build_product(const Partition& q, const Partition& p) const = 0;
  /** Called with fine != coarse, fine refining coarse, both non-empty. */
  virtual Mat build_refine(const Partition& fine, const Partition& coarse) const = 0;
  /** Called with p non-empty. */
  virtual Vec build_unit(const Partition& p) const = 0;

  std::recursive_mutex& mutex() const { return mutex_; }

 private:
  Mat left_identification(const Partition& p) const;
  Mat right_identification(const Partition& q) const;

  StandardForm sf_;
  mutable std::recursive_mutex mutex_;
  mutable std::map<Partition, BimodulePtr> fibers_;
  mutable std::map<std::pair<Partition, Partition>, std::shared_ptr<const RelativeTensor>> fusions_;
  mutable std::map<std::pair<Partition, Partition>, Mat> products_;
  mutable std::map<std::pair<Partition, Partition>, Mat> refinements_;
  mutable std::map<Partition, Vec> units_;
};

using ProductSystemPtr = std::shared_ptr<const ProductSystem>;

/**
 * The cells H^T(p) = (M (x)_{t_1} L^2) (x)^M ... (x)^M (M (x)_{t_n} L^2) of a
 * family of unital CP maps, built as left-nested relative tensor products.
 */
class CellSystem : public ProductSystem {
 public:
  CellSystem(StandardForm sf, CpFamily family);

  const GnsTensor& gns(const Rational& t) const;
  /** H(p') (x)^M (M (x)_{t_n} L^2) for p = p' v (t_n), #p >= 2. */
  std::shared_ptr<const RelativeTensor> cell_fusion(const Partition& p) const;
  /** (x_1 (x) y_1 phi^{1/2}) phi^{-1/2} ... (x_n (x) y_n phi^{1/2}) in H(p). */
  Vec word(const Partition& p, const std::vector<Mat>& xs, const std::vector<Mat>& ys) const;
  CpMap map_at(const Rational& t) const { return family_(t); }

 protected:
  BimodulePtr build_fiber(const Partition& p) const override;
  std::shared_ptr<const RelativeTensor> build_fusion(const Partition& q, const Partition& p) const override;
  Mat build_product(const Partition& q, const Partition& p) const override;
  Mat build_refine(const Partition& fine, const Partition& coarse) const override;
  Vec build_unit(const Partition& p) const override;

 private:
  /** G(s) -> H(group), x (x) y phi^{1/2} -> (x (x) phi^{1/2}) ... (1 (x) y phi^{1/2}). */
  Mat refinement_piece(const Partition& group) const;

  CpFamily family_;
  mutable std::map<Rational, GnsTensor> gns_;
  mutable std::map<Partition, std::shared_ptr<const RelativeTensor>> cell_fusions_;
};

struct Cell {
  Partition partition;
  BimodulePtr space;
};

Cell build_cell(const CellSystem& system, const Partition& p);
BimoduleMap refinement_isometry(const ProductSystem& system, const Partition& fine, const Partition& coarse);
BimoduleMap multiply_cells(const ProductSystem& system, const Partition& q, const Partition& p);

/** A unit sampled at finitely many times, each vector stored at some partition level. */
struct UnitSample {
  Partition partition;
  Vec vector;
};

struct Unit {
  std::map<Rational, UnitSample> samples;
};

/** The distinguished unit of `system` sampled at each time t at level (t). */
Unit canonical_unit(const ProductSystem& system, const std::vector<Rational>& times);
/** lambda(t) = exp(-c t) xi(t). */
Unit scale_unit(const Unit& unit, double c);
/** The sample at t pushed to the finer level `level`. */
Vec unit_vector_at(const ProductSystem& system, const Unit& unit, const Rational& t, const Partition& level);

/** max_t || pi(xi(t))* pi(xi(t)) - 1 ||. */
double unit_unital_defect(const ProductSystem& system, const Unit& unit);
/** max_t || pi(xi(t))* pi(xi(t)) || (operator norm of the element). */
double unit_contractive_norm(const ProductSystem& system, const Unit& unit);
/** Max over sampled s, t with s + t sampled of the factorization defect. */
double unit_factorization_defect(const ProductSystem& system, const Unit& unit);

/**
 * U(p)(x_1 xi(t_1) phi^{-1/2} ... x_n xi(t_n) y) where t_i are the parts of p
 * (each must be sampled). The level of the result is written to `level`.
 */
Vec unit_word(const ProductSystem& system, const Unit& unit, const Partition& p,
              const std::vector<Mat>& xs, const Mat& y, Partition* level = nullptr);

struct GeneratingLevel {
  Partition partition;
  Partition level;
  int rank = 0;
  int dim = 0;
};

struct GeneratingReport {
  std::vector<GeneratingLevel> levels;
  bool full = true;
  std::string sampling;
};

/** Exact span of all unit words over basis x_i, y at each listed partition. */
GeneratingReport generating_test(const ProductSystem& system, const Unit& unit,
                                 const std::vector<Partition>& partitions);

/** T^Xi_t(x) = pi(xi(t))* pi(x xi(t)) at one sampled time. */
CpMap cp_from_unit_at(const ProductSystem& system, const Unit& unit, const Rational& t);
std::map<Rational, CpMap> cp_from_unit(const ProductSystem& system, const Unit& unit);
/** t -> T^Xi_t, evaluated lazily; t must be a sampled time. */
CpFamily family_from_unit(ProductSystemPtr system, Unit unit);
/** Max over sampled s, t with s + t sampled of || T_s T_t - T_{s+t} ||. */
double family_semigroup_defect(const std::map<Rational, CpMap>& family);

struct RoundtripIso {
  Partition partition;
  Partition target_level;
  BimoduleMap map;
  MapReport report;
};

/**
 * u_p from the cells of T^Xi at level p into `target` at the level of the
 * Xi-words: (x_1 (x) phi^{1/2}) ... (x_n (x) phi^{1/2} y) -> U(p)(x_1 xi(t_1) ... x_n xi(t_n) y).
 */
RoundtripIso roundtrip_iso(const CellSystem& source, const ProductSystem& target, const Unit& unit,
                           const Partition& p, double tol = 1e-10);

/** || V_{q,p}(u_q (x) u_p) - u_{q v p} U_{q,p} ||. */
double roundtrip_compatibility_defect(const CellSystem& source, const ProductSystem& target,
                                      const Unit& unit, const Partition& q, const Partition& p);

}  // namespace wstar
