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

#include "wstar/prodsys.hpp"

#include <cmath>

#include "wstar/errors.hpp"

namespace wstar {

CpFamily family_of(const CpSemigroup& semigroup) {
  return [semigroup](const Rational& t) { return semigroup.evaluate(t); };
}

ProductSystem::ProductSystem(StandardForm sf) : sf_(std::move(sf)) {}

BimodulePtr ProductSystem::fiber(const Partition& p) const {
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  auto it = fibers_.find(p);
  if (it != fibers_.end()) return it->second;
  BimodulePtr f = p.empty() ? std::make_shared<Bimodule>(standard_bimodule(sf_)) : build_fiber(p);
  fibers_.emplace(p, f);
  return f;
}

std::shared_ptr<const RelativeTensor> ProductSystem::fusion(const Partition& q, const Partition& p) const {
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  const auto key = std::make_pair(q, p);
  auto it = fusions_.find(key);
  if (it != fusions_.end()) return it->second;
  auto f = build_fusion(q, p);
  fusions_.emplace(key, f);
  return f;
}

std::shared_ptr<const RelativeTensor> ProductSystem::build_fusion(const Partition& q, const Partition& p) const {
  return std::make_shared<RelativeTensor>(relative_tensor(sf_, fiber(q), fiber(p)));
}

Mat ProductSystem::product(const Partition& q, const Partition& p) const {
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  const auto key = std::make_pair(q, p);
  auto it = products_.find(key);
  if (it != products_.end()) return it->second;
  Mat u;
  if (q.empty()) {
    u = left_identification(p);
  } else if (p.empty()) {
    u = right_identification(q);
  } else {
    u = build_product(q, p);
  }
  products_.emplace(key, u);
  return u;
}

Mat ProductSystem::left_identification(const Partition& p) const {
  // xi phi^{-1/2} eta -> (xi rho^{-1/2}) eta
  const int d = sf_.dim();
  const BimodulePtr h = fiber(p);
  const int dp = h->dim();
  Mat f(dp, d * dp);
  for (int a = 0; a < d; ++a) f.middleCols(a * dp, dp) = h->left_action(sf_.right_inv_sqrt_op().col(a));
  return f * fusion(Partition(), p)->lift;
}

Mat ProductSystem::right_identification(const Partition& q) const {
  // xi phi^{-1/2} eta -> xi (rho^{-1/2} eta)
  const int d = sf_.dim();
  const BimodulePtr h = fiber(q);
  const int dq = h->dim();
  Mat f(dq, dq * d);
  std::vector<Mat> r;
  for (int b = 0; b < d; ++b) r.push_back(h->right_action(sf_.left_inv_sqrt_op().col(b)));
  for (int a = 0; a < dq; ++a)
    for (int b = 0; b < d; ++b) f.col(a * d + b) = r[b].col(a);
  return f * fusion(q, Partition())->lift;
}

Mat ProductSystem::refine(const Partition& fine, const Partition& coarse) const {
  if (!refines(fine, coarse)) throw OrderError(fine.str() + " does not refine " + coarse.str());
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  if (fine == coarse) {
    const int n = fiber(fine)->dim();
    return Mat::Identity(n, n);
  }
  const auto key = std::make_pair(fine, coarse);
  auto it = refinements_.find(key);
  if (it != refinements_.end()) return it->second;
  Mat a = build_refine(fine, coarse);
  refinements_.emplace(key, a);
  return a;
}

Vec ProductSystem::unit(const Partition& p) const {
  if (p.empty()) return sf_.cyclic();
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  auto it = units_.find(p);
  if (it != units_.end()) return it->second;
  Vec v = build_unit(p);
  units_.emplace(p, v);
  return v;
}

CellSystem::CellSystem(StandardForm sf, CpFamily family)
    : ProductSystem(std::move(sf)), family_(std::move(family)) {}

const GnsTensor& CellSystem::gns(const Rational& t) const {
  std::lock_guard<std::recursive_mutex> lock(mutex());
  auto it = gns_.find(t);
  if (it != gns_.end()) return it->second;
  if (t <= Rational(0)) throw DomainError("cells need positive parts");
  return gns_.emplace(t, gns_tensor(standard_form(), family_(t))).first->second;
}

std::shared_ptr<const RelativeTensor> CellSystem::cell_fusion(const Partition& p) const {
  if (p.size() < 2) throw DomainError("cell_fusion needs at least two parts");
  std::lock_guard<std::recursive_mutex> lock(mutex());
  auto it = cell_fusions_.find(p);
  if (it != cell_fusions_.end()) return it->second;
  const std::size_t n = p.size();
  auto f = std::make_shared<RelativeTensor>(
      relative_tensor(standard_form(), fiber(p.prefix(n - 1)), fiber(p.suffix_from(n - 1))));
  cell_fusions_.emplace(p, f);
  return f;
}

BimodulePtr CellSystem::build_fiber(const Partition& p) const {
  if (p.size() == 1) return gns(p[0]).space;
  return cell_fusion(p)->space;
}

std::shared_ptr<const RelativeTensor> CellSystem::build_fusion(const Partition& q, const Partition& p) const {
  if (!q.empty() && p.size() == 1) return cell_fusion(join(q, p));
  return ProductSystem::build_fusion(q, p);
}

Mat CellSystem::build_product(const Partition& q, const Partition& p) const {
  const std::size_t n = p.size();
  const Partition qp = join(q, p);
  if (n == 1) {
    const int d = fiber(qp)->dim();
    return Mat::Identity(d, d);
  }
  // a phi^{-1/2} (b phi^{-1/2} c) -> U_{q,p'}(a phi^{-1/2} b) phi^{-1/2} c
  const Partition head = p.prefix(n - 1);
  const auto source = fusion(q, p);
  const auto inner = cell_fusion(p);
  const auto first = fusion(q, head);
  const auto target = cell_fusion(qp);
  const int dq = fiber(q)->dim();
  const int dg = fiber(p.suffix_from(n - 1))->dim();
  const Mat x = target->quotient * kron(Mat(product(q, head) * first->quotient), Mat::Identity(dg, dg));
  const Mat y = x * kron(Mat::Identity(dq, dq), inner->lift);
  return y * source->lift;
}

Vec CellSystem::word(const Partition& p, const std::vector<Mat>& xs, const std::vector<Mat>& ys) const {
  if (p.empty()) throw DomainError("words need a non-empty partition");
  if (xs.size() != p.size() || ys.size() != p.size()) throw DomainError("word length does not match the partition");
  const Algebra& a = algebra();
  Vec v = gns(p[0]).vector(a, xs[0], standard_form().right_embed(ys[0]));
  for (std::size_t i = 1; i < p.size(); ++i) {
    const Vec w = gns(p[i]).vector(a, xs[i], standard_form().right_embed(ys[i]));
    v = cell_fusion(p.prefix(i + 1))->fuse(v, w);
  }
  return v;
}

Vec CellSystem::build_unit(const Partition& p) const {
  const std::vector<Mat> ones(p.size(), algebra().identity());
  return word(p, ones, ones);
}

Mat CellSystem::refinement_piece(const Partition& group) const {
  const Rational s = group.total();
  const GnsTensor& g = gns(s);
  if (group.size() == 1) return Mat::Identity(g.space->dim(), g.space->dim());
  const Algebra& a = algebra();
  const int d = a.dim();
  const std::size_t k = group.size();
  Mat images(fiber(group)->dim(), d * d);
  std::vector<Mat> xs(k, a.identity()), ys(k, a.identity());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      xs[0] = a.basis(i);
      ys[k - 1] = standard_form().materialize_right(a.coords(a.basis(j)));
      images.col(i * d + j) = word(group, xs, ys);
    }
  }
  return images * g.lift;
}

Mat CellSystem::build_refine(const Partition& fine, const Partition& coarse) const {
  const std::vector<Partition> groups = refinement_groups(fine, coarse);
  Mat b = refinement_piece(groups[0]);
  Partition level = groups[0];
  for (std::size_t j = 1; j < groups.size(); ++j) {
    const Mat piece = refinement_piece(groups[j]);
    const auto source = cell_fusion(coarse.prefix(j + 1));
    const auto target = fusion(level, groups[j]);
    b = product(level, groups[j]) * tensor_maps(*source, *target, b, piece);
    level = join(level, groups[j]);
  }
  return b;
}

Cell build_cell(const CellSystem& system, const Partition& p) { return Cell{p, system.fiber(p)}; }

BimoduleMap refinement_isometry(const ProductSystem& system, const Partition& fine, const Partition& coarse) {
  return BimoduleMap{system.fiber(coarse), system.fiber(fine), system.refine(fine, coarse)};
}

BimoduleMap multiply_cells(const ProductSystem& system, const Partition& q, const Partition& p) {
  return BimoduleMap{system.fusion(q, p)->space, system.fiber(join(q, p)), system.product(q, p)};
}

Unit canonical_unit(const ProductSystem& system, const std::vector<Rational>& times) {
  Unit u;
  for (const auto& t : times) {
    if (t < Rational(0)) throw DomainError("unit sampled at a negative time");
    const Partition p = t == Rational(0) ? Partition() : Partition({t});
    u.samples[t] = UnitSample{p, system.unit(p)};
  }
  return u;
}

Unit scale_unit(const Unit& unit, double c) {
  Unit out = unit;
  for (auto& [t, s] : out.samples) s.vector *= std::exp(-c * to_double(t));
  return out;
}

namespace {

const UnitSample& sample_at(const Unit& unit, const Rational& t) {
  auto it = unit.samples.find(t);
  if (it == unit.samples.end()) throw DomainError("unit is not sampled at t = " + to_string(t));
  return it->second;
}

// m(t) = pi(xi(t))* pi(xi(t)) as an algebra element
Mat unit_gram(const ProductSystem& system, const UnitSample& s) {
  const Bimodule& h = *system.fiber(s.partition);
  const Mat p = pi_phi(system.standard_form(), h, s.vector);
  return system.standard_form().element_from_left_operator(p.adjoint() * p);
}

}  // namespace

Vec unit_vector_at(const ProductSystem& system, const Unit& unit, const Rational& t, const Partition& level) {
  const UnitSample& s = sample_at(unit, t);
  return system.refine(level, s.partition) * s.vector;
}

double unit_unital_defect(const ProductSystem& system, const Unit& unit) {
  double worst = 0.0;
  const Mat one = system.algebra().identity();
  for (const auto& [t, s] : unit.samples) worst = std::max(worst, (unit_gram(system, s) - one).norm());
  return worst;
}

double unit_contractive_norm(const ProductSystem& system, const Unit& unit) {
  double worst = 0.0;
  for (const auto& [t, s] : unit.samples) worst = std::max(worst, op_norm(unit_gram(system, s)));
  return worst;
}

double unit_factorization_defect(const ProductSystem& system, const Unit& unit) {
  double worst = 0.0;
  for (const auto& [s, xs] : unit.samples) {
    for (const auto& [t, xt] : unit.samples) {
      auto it = unit.samples.find(s + t);
      if (it == unit.samples.end()) continue;
      const Partition joined = join(xs.partition, xt.partition);
      const Vec lhs = system.product(xs.partition, xt.partition) *
                      system.fusion(xs.partition, xt.partition)->fuse(xs.vector, xt.vector);
      const Partition r = common_refinement(joined, it->second.partition);
      const Vec a = system.refine(r, joined) * lhs;
      const Vec b = system.refine(r, it->second.partition) * it->second.vector;
      worst = std::max(worst, (a - b).norm());
    }
  }
  return worst;
}

Vec unit_word(const ProductSystem& system, const Unit& unit, const Partition& p, const std::vector<Mat>& xs,
              const Mat& y, Partition* level) {
  if (p.empty()) throw DomainError("unit words need a non-empty partition");
  if (xs.size() != p.size()) throw DomainError("word length does not match the partition");
  const Algebra& a = system.algebra();
  Partition at;
  Vec v;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const UnitSample& s = sample_at(unit, p[i]);
    const Vec w = system.fiber(s.partition)->left_action(a.coords(xs[i])) * s.vector;
    if (i == 0) {
      v = w;
      at = s.partition;
    } else {
      v = system.product(at, s.partition) * system.fusion(at, s.partition)->fuse(v, w);
      at = join(at, s.partition);
    }
  }
  v = system.fiber(at)->right_action(a.coords(y)) * v;
  if (level) *level = at;
  return v;
}

GeneratingReport generating_test(const ProductSystem& system, const Unit& unit,
                                 const std::vector<Partition>& partitions) {
  GeneratingReport report;
  report.sampling = "all basis words x_1..x_n, y on partitions";
  const Algebra& a = system.algebra();
  const int d = a.dim();
  for (const Partition& p : partitions) {
    if (p.empty()) continue;
    report.sampling += " " + p.str();
    Partition at;
    Mat span;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const UnitSample& s = sample_at(unit, p[i]);
      const BimodulePtr h = system.fiber(s.partition);
      std::vector<Vec> xv;
      for (int k = 0; k < d; ++k) xv.push_back(h->left[k] * s.vector);
      if (i == 0) {
        Mat cols(h->dim(), d);
        for (int k = 0; k < d; ++k) cols.col(k) = xv[k];
        span = column_span(cols);
        at = s.partition;
        continue;
      }
      const auto f = system.fusion(at, s.partition);
      const Mat u = system.product(at, s.partition);
      Mat cols(u.rows(), span.cols() * d);
      for (Eigen::Index c = 0; c < span.cols(); ++c)
        for (int k = 0; k < d; ++k) cols.col(c * d + k) = u * f->fuse(span.col(c), xv[k]);
      span = column_span(cols);
      at = join(at, s.partition);
    }
    const BimodulePtr h = system.fiber(at);
    Mat cols(h->dim(), span.cols() * d);
    for (Eigen::Index c = 0; c < span.cols(); ++c)
      for (int k = 0; k < d; ++k) cols.col(c * d + k) = h->right[k] * span.col(c);
    GeneratingLevel lvl{p, at, numerical_rank(cols), h->dim()};
    report.full = report.full && lvl.rank == lvl.dim;
    report.levels.push_back(lvl);
  }
  return report;
}

CpMap cp_from_unit_at(const ProductSystem& system, const Unit& unit, const Rational& t) {
  const UnitSample& s = sample_at(unit, t);
  const StandardForm& sf = system.standard_form();
  const Algebra& a = sf.algebra();
  const BimodulePtr h = system.fiber(s.partition);
  const Mat p = pi_phi(sf, *h, s.vector);
  Mat action(a.dim(), a.dim());
  for (int k = 0; k < a.dim(); ++k) {
    const Mat m = sf.element_from_left_operator(p.adjoint() * h->left[k] * p);
    action.col(k) = a.coords(m);
  }
  return CpMap(a, action);
}

std::map<Rational, CpMap> cp_from_unit(const ProductSystem& system, const Unit& unit) {
  std::map<Rational, CpMap> out;
  for (const auto& [t, s] : unit.samples) out.emplace(t, cp_from_unit_at(system, unit, t));
  return out;
}

CpFamily family_from_unit(ProductSystemPtr system, Unit unit) {
  return [system, unit](const Rational& t) { return cp_from_unit_at(*system, unit, t); };
}

double family_semigroup_defect(const std::map<Rational, CpMap>& family) {
  double worst = 0.0;
  for (const auto& [s, ts] : family) {
    for (const auto& [t, tt] : family) {
      auto it = family.find(s + t);
      if (it == family.end()) continue;
      worst = std::max(worst, map_distance(ts.compose(tt), it->second));
    }
  }
  return worst;
}

namespace {

// Enumerates all tuples over {0..base-1} of the given length.
bool next_tuple(std::vector<int>& idx, int base) {
  for (std::size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < base) return true;
    idx[i] = 0;
  }
  return false;
}

}  // namespace

RoundtripIso roundtrip_iso(const CellSystem& source, const ProductSystem& target, const Unit& unit,
                           const Partition& p, double tol) {
  if (p.empty()) throw DomainError("roundtrip_iso needs a non-empty partition");
  const Algebra& a = source.algebra();
  const int d = a.dim();
  Unit source_unit = canonical_unit(source, p.parts());
  std::vector<int> idx(p.size() + 1, 0);
  std::vector<Vec> src, tgt;
  Partition level;
  do {
    std::vector<Mat> xs;
    for (std::size_t i = 0; i < p.size(); ++i) xs.push_back(a.basis(idx[i]));
    const Mat& y = a.basis(idx.back());
    src.push_back(unit_word(source, source_unit, p, xs, y));
    tgt.push_back(unit_word(target, unit, p, xs, y, &level));
  } while (next_tuple(idx, d));
  Mat s(src.front().size(), static_cast<Eigen::Index>(src.size()));
  Mat t(tgt.front().size(), static_cast<Eigen::Index>(tgt.size()));
  for (std::size_t i = 0; i < src.size(); ++i) {
    s.col(static_cast<Eigen::Index>(i)) = src[i];
    t.col(static_cast<Eigen::Index>(i)) = tgt[i];
  }
  RoundtripIso out;
  out.partition = p;
  out.target_level = level;
  out.map = BimoduleMap{source.fiber(p), target.fiber(level), map_from_family(s, t)};
  out.report = verify_map(out.map, MapFlags{true, true, true}, tol);
  return out;
}

double roundtrip_compatibility_defect(const CellSystem& source, const ProductSystem& target,
                                      const Unit& unit, const Partition& q, const Partition& p) {
  const RoundtripIso uq = roundtrip_iso(source, target, unit, q);
  const RoundtripIso up = roundtrip_iso(source, target, unit, p);
  const RoundtripIso uqp = roundtrip_iso(source, target, unit, join(q, p));
  const Mat lhs = target.product(uq.target_level, up.target_level) *
                  tensor_maps(*source.fusion(q, p), *target.fusion(uq.target_level, up.target_level),
                              uq.map.matrix, up.map.matrix);
  const Mat rhs = uqp.map.matrix * source.product(q, p);
  return (lhs - rhs).norm();
}

}  // namespace wstar
