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

#include "wstar/classify.hpp"

#include <algorithm>
#include <mutex>

#include "wstar/errors.hpp"

namespace wstar {

struct E0Semigroup::Cache {
  std::mutex mutex;
  std::map<Rational, Mat> unitaries;
};

E0Semigroup::E0Semigroup(Algebra algebra, UnitaryFamily family, std::string label)
    : algebra_(std::move(algebra)), family_(std::move(family)), label_(std::move(label)),
      cache_(std::make_shared<Cache>()) {}

E0Semigroup E0Semigroup::inner(const Algebra& algebra, const Mat& k) {
  if (!algebra.is_element(k, 1e-10)) throw DomainError("inner generator must lie in the algebra");
  if ((k - k.adjoint()).norm() > 1e-10) throw DomainError("inner generator must be Hermitian");
  const Mat gen = k;
  return E0Semigroup(
      algebra, [gen](const Rational& t) { return expm(cplx(0.0, to_double(t)) * gen); }, "inner");
}

E0Semigroup E0Semigroup::stepped(const Algebra& algebra, const Rational& delta, const Mat& v) {
  if (delta <= Rational(0)) throw DomainError("step must be positive");
  const int n = algebra.size();
  if (v.rows() != n || v.cols() != n) throw DomainError("stepping unitary has the wrong size");
  if ((v.adjoint() * v - Mat::Identity(n, n)).norm() > 1e-10) throw DomainError("stepping matrix is not unitary");
  for (int e = 0; e < algebra.dim(); ++e)
    if (algebra.off_block_defect(v.adjoint() * algebra.basis(e) * v) > 1e-10)
      throw DomainError("stepping unitary does not normalize the algebra");
  return E0Semigroup(
      algebra,
      [delta, v, n](const Rational& t) {
        const Rational q = t / delta;
        if (t < Rational(0) || q.denominator() != 1)
          throw DomainError("time " + to_string(t) + " is not on the grid of step " + to_string(delta));
        Mat u = Mat::Identity(n, n);
        for (std::int64_t i = 0; i < q.numerator(); ++i) u = u * v;
        return u;
      },
      "stepped");
}

E0Semigroup E0Semigroup::implemented(const Algebra& algebra, UnitaryFamily family, std::string label) {
  return E0Semigroup(algebra, std::move(family), std::move(label));
}

E0Semigroup E0Semigroup::identity(const Algebra& algebra) {
  const int n = algebra.size();
  return E0Semigroup(algebra, [n](const Rational&) { return Mat(Mat::Identity(n, n)); }, "identity");
}

Mat E0Semigroup::unitary(const Rational& t) const {
  if (t < Rational(0)) throw DomainError("negative time");
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->unitaries.find(t);
  if (it != cache_->unitaries.end()) return it->second;
  Mat u = family_(t);
  cache_->unitaries.emplace(t, u);
  return u;
}

CpMap E0Semigroup::evaluate(const Rational& t) const {
  const Mat u = unitary(t);
  for (int e = 0; e < algebra_.dim(); ++e)
    if (algebra_.off_block_defect(u.adjoint() * algebra_.basis(e) * u) > 1e-9)
      throw DomainError("implementing unitary at t = " + to_string(t) + " does not normalize the algebra");
  return CpMap::from_function(algebra_, [&u](const Mat& x) { return Mat(u.adjoint() * x * u); });
}

CpFamily E0Semigroup::family() const {
  const E0Semigroup self = *this;
  return [self](const Rational& t) { return self.evaluate(t); };
}

double e0_endomorphism_defect(const E0Semigroup& theta, const std::vector<Rational>& times) {
  const Algebra& a = theta.algebra();
  double worst = 0.0;
  for (const Rational& t : times) {
    const CpMap m = theta.evaluate(t);
    worst = std::max(worst, star_homomorphism_defect(m));
    worst = std::max(worst, op_norm(m(a.identity()) - a.identity()));
  }
  return worst;
}

double e0_semigroup_defect(const E0Semigroup& theta, const std::vector<Rational>& times) {
  double worst = 0.0;
  for (const Rational& s : times)
    for (const Rational& t : times) {
      if (std::find(times.begin(), times.end(), s + t) == times.end()) continue;
      worst = std::max(worst, map_distance(theta.evaluate(s).compose(theta.evaluate(t)), theta.evaluate(s + t)));
    }
  return worst;
}

TwistedSystem::TwistedSystem(StandardForm sf, E0Semigroup theta)
    : ProductSystem(std::move(sf)), theta_(std::move(theta)) {}

BimodulePtr TwistedSystem::build_fiber(const Partition& p) const {
  const Algebra& a = algebra();
  const CpMap th = theta_.evaluate(p.total());
  auto b = std::make_shared<Bimodule>();
  b->provenance = Provenance::Twisted;
  b->dimension = a.dim();
  for (int k = 0; k < a.dim(); ++k) {
    b->left.push_back(a.left_mult(th(a.basis(k))));
    b->right.push_back(a.right_mult(a.basis(k)));
  }
  b->generators = Mat::Identity(a.dim(), a.dim());
  for (int k = 0; k < a.dim(); ++k) b->generator_labels.push_back(a.basis_label(k));
  return b;
}

Mat TwistedSystem::build_product(const Partition& q, const Partition& p) const {
  const StandardForm& sf = standard_form();
  const Algebra& a = algebra();
  const int d = a.dim();
  const CpMap th = theta_.evaluate(p.total());
  Mat f(d, d * d);
  for (int i = 0; i < d; ++i) {
    const Mat left = a.left_mult(th(sf.materialize_right(Vec::Unit(d, i))));
    for (int j = 0; j < d; ++j) f.col(i * d + j) = left.col(j);
  }
  return f * fusion(q, p)->lift;
}

Mat TwistedSystem::build_refine(const Partition&, const Partition&) const {
  const int d = algebra().dim();
  return Mat::Identity(d, d);
}

Vec TwistedSystem::build_unit(const Partition&) const { return standard_form().cyclic(); }

namespace {

void for_each_index_tuple(int base, int length, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(length, 0);
  while (true) {
    f(idx);
    int pos = length - 1;
    while (pos >= 0 && ++idx[pos] == base) idx[pos--] = 0;
    if (pos < 0) return;
  }
}

}  // namespace

CanonicalIso canonical_iso(const CellSystem& cells, const TwistedSystem& twisted, const Partition& p, double tol) {
  if (p.empty()) throw DomainError("canonical isomorphism needs a non-empty partition");
  const StandardForm& sf = cells.standard_form();
  const Algebra& a = sf.algebra();
  const int d = a.dim();
  const int n = static_cast<int>(p.size());
  std::vector<CpMap> th;
  for (const Rational& t : p.parts()) th.push_back(twisted.semigroup().evaluate(t));

  // Interior y_i are held at 1 for partitions with more than two parts.
  const bool full = n <= 2;
  const int length = full ? 2 * n : n + 1;
  std::vector<Vec> src;
  std::vector<Vec> dst;
  for_each_index_tuple(d, length, [&](const std::vector<int>& idx) {
    std::vector<Mat> xs(n);
    std::vector<Mat> ys(n, a.identity());
    for (int i = 0; i < n; ++i) {
      xs[i] = a.basis(full ? idx[2 * i] : idx[i]);
      if (full) ys[i] = a.basis(idx[2 * i + 1]);
    }
    if (!full) ys[n - 1] = a.basis(idx[n]);
    src.push_back(cells.word(p, xs, ys));
    Mat acc = th[0](xs[0]) * ys[0];
    for (int i = 1; i < n; ++i) acc = th[i](acc * xs[i]) * ys[i];
    dst.push_back(sf.right_embed(acc));
  });
  Mat s(src.front().size(), static_cast<int>(src.size()));
  Mat t(d, static_cast<int>(dst.size()));
  for (std::size_t c = 0; c < src.size(); ++c) {
    s.col(c) = src[c];
    t.col(c) = dst[c];
  }
  CanonicalIso out;
  out.partition = p;
  out.map = BimoduleMap{cells.fiber(p), twisted.fiber(p), map_from_family(s, t)};
  out.report = verify_map(out.map, MapFlags{true, false, true}, tol);
  out.unit_defect = (out.map.matrix * cells.unit(p) - sf.cyclic()).norm();
  return out;
}

namespace {

/** Coefficient matrix of X -> X a - b X acting on column-major vec(X). */
Mat sylvester_rows(const Mat& a, const Mat& b) {
  const int d = static_cast<int>(a.rows());
  const Mat id = Mat::Identity(d, d);
  return kron(Mat(a.transpose()), id) - kron(id, b);
}

}  // namespace

std::vector<Mat> intertwiner_basis(const StandardForm& sf, const CpMap& alpha_t, const CpMap& beta_t, double tol) {
  const Algebra& a = sf.algebra();
  const int d = a.dim();
  std::vector<Mat> blocks;
  for (int e = 0; e < d; ++e) {
    const Mat x = a.basis(e);
    blocks.push_back(sylvester_rows(a.left_mult(beta_t(x)), a.left_mult(alpha_t(x))));
    const Mat r = a.right_mult(x);
    blocks.push_back(sylvester_rows(r, r));
  }
  Mat stacked(static_cast<int>(blocks.size()) * d * d, d * d);
  for (std::size_t i = 0; i < blocks.size(); ++i) stacked.middleRows(i * d * d, d * d) = blocks[i];
  const Mat ns = null_space(stacked, tol * std::max(1.0, op_norm(stacked)));
  std::vector<Mat> out;
  for (int c = 0; c < ns.cols(); ++c) out.push_back(Eigen::Map<const Mat>(ns.col(c).data(), d, d));
  return out;
}

double intertwining_defect(const StandardForm& sf, const CpMap& alpha_t, const CpMap& beta_t, const Mat& u) {
  const Algebra& a = sf.algebra();
  double worst = 0.0;
  for (int e = 0; e < a.dim(); ++e) {
    const Mat x = a.basis(e);
    worst = std::max(worst, op_norm(u * a.left_mult(beta_t(x)) - a.left_mult(alpha_t(x)) * u));
    worst = std::max(worst, op_norm(u * a.right_mult(x) - a.right_mult(x) * u));
  }
  return worst;
}

EquivalenceReport cocycle_equivalence(const StandardForm& sf, const E0Semigroup& alpha, const E0Semigroup& beta,
                                      const Rational& delta, int levels, std::uint64_t seed, double tol) {
  const Algebra& a = sf.algebra();
  if (!(alpha.algebra() == a) || !(beta.algebra() == a)) throw DomainError("semigroups act on different algebras");
  if (levels < 1) throw DomainError("need at least one grid time");
  const int d = a.dim();
  const int n = a.size();
  EquivalenceReport rep;
  rep.cocycle.push_back(a.identity());

  auto fail = [&rep](const Rational& t, std::string reason) {
    rep.equivalent = false;
    rep.failing_time = t;
    rep.reason = std::move(reason);
    return rep;
  };

  const CpMap alpha_delta = alpha.evaluate(delta);
  for (int k = 1; k <= levels; ++k) {
    const Rational t = delta * static_cast<std::int64_t>(k);
    const CpMap at = alpha.evaluate(t);
    const CpMap bt = beta.evaluate(t);
    EquivalenceStep step;
    step.t = t;
    const std::vector<Mat> basis = intertwiner_basis(sf, at, bt, tol);
    step.intertwiner_dim = static_cast<int>(basis.size());
    if (basis.empty()) {
      rep.steps.push_back(step);
      return fail(t, "no intertwiner of the twisted cells at t = " + to_string(t));
    }
    Mat w;
    if (k == 1) {
      Rng rng(seed);
      std::normal_distribution<double> g;
      Mat best;
      double best_defect = INFINITY;
      const int m = static_cast<int>(basis.size());
      Mat gram(m, m);
      Vec rhs(m);
      for (int i = 0; i < m; ++i) {
        rhs(i) = basis[i].adjoint().trace();
        for (int j = 0; j < m; ++j) gram(i, j) = (basis[i].adjoint() * basis[j]).trace();
      }
      const Vec nearest = pseudo_inverse(gram) * rhs;
      for (int attempt = 0; attempt < 9 && best_defect > tol; ++attempt) {
        Mat u = Mat::Zero(d, d);
        for (int i = 0; i < m; ++i) u += (attempt == 0 ? nearest(i) : cplx(g(rng), g(rng))) * basis[i];
        if (u.norm() < 1e-8) continue;
        u = polar_unitary(u);
        const double def = intertwining_defect(sf, at, bt, u);
        if (def < best_defect) {
          best_defect = def;
          best = u;
        }
      }
      if (best_defect > tol) return fail(t, "no unitary intertwiner at t = " + to_string(t));
      w = sf.materialize_right(best * sf.cyclic());
      const cplx phase = (sf.rho() * w).trace();
      if (std::abs(phase) > 1e-12) w *= std::conj(phase) / std::abs(phase);
    } else {
      w = alpha_delta(rep.cocycle.back()) * rep.cocycle[1];
    }
    rep.cocycle.push_back(w);
    for (int e = 0; e < d; ++e) {
      const Mat x = a.basis(e);
      step.conjugation_defect = std::max(step.conjugation_defect, op_norm(bt(x) - w.adjoint() * at(x) * w));
    }
    step.unitarity_defect = op_norm(w.adjoint() * w - Mat::Identity(n, n));
    step.backward_defect = intertwining_defect(sf, at, bt, a.left_mult(w));
    step.intertwining_defect = step.backward_defect;
    rep.steps.push_back(step);
    if (step.conjugation_defect > tol || step.unitarity_defect > tol || step.backward_defect > tol)
      return fail(t, "cocycle propagated from the first grid time fails at t = " + to_string(t));
  }

  for (int j = 0; j <= levels; ++j)
    for (int k = 0; j + k <= levels; ++k) {
      const CpMap ak = alpha.evaluate(delta * static_cast<std::int64_t>(k));
      rep.cocycle_law_defect =
          std::max(rep.cocycle_law_defect, op_norm(rep.cocycle[j + k] - ak(rep.cocycle[j]) * rep.cocycle[k]));
    }
  for (int k = 0; k < levels; ++k)
    rep.continuity_modulus = std::max(rep.continuity_modulus, op_norm(rep.cocycle[k + 1] - rep.cocycle[k]));
  if (rep.cocycle_law_defect > tol) {
    rep.equivalent = false;
    rep.reason = "cocycle law fails";
    return rep;
  }
  rep.equivalent = true;
  rep.reason = "verified unitary cocycle";
  return rep;
}

UnitCocycle unit_to_cocycle(const StandardForm& sf, const E0Semigroup& theta, const std::map<Rational, Vec>& unit) {
  UnitCocycle out;
  for (const auto& [t, v] : unit) out.values[t] = sf.materialize_right(v);
  for (const auto& [s, as] : out.values)
    for (const auto& [t, at] : out.values) {
      auto it = out.values.find(s + t);
      if (it == out.values.end()) continue;
      out.law_defect = std::max(out.law_defect, op_norm(theta.evaluate(t)(as) * at - it->second));
    }
  return out;
}

UnitOperators unit_operator(const StandardForm& sf, const E0Semigroup& theta, const UnitCocycle& a) {
  if (!sf.is_tracial(1e-10)) throw DomainError("unit operators are only formed for a tracial state");
  const Algebra& alg = sf.algebra();
  const int d = alg.dim();
  UnitOperators out;
  for (const auto& [t, at] : a.values) {
    const CpMap th = theta.evaluate(t);
    Mat x(d, d);
    for (int j = 0; j < d; ++j) x.col(j) = sf.right_embed(th(sf.materialize_right(Vec::Unit(d, j))) * at);
    out.values[t] = x;
    for (int e = 0; e < d; ++e) {
      const Mat b = alg.basis(e);
      out.intertwining_defect =
          std::max(out.intertwining_defect, op_norm(x * alg.left_mult(b) - alg.left_mult(th(b)) * x));
    }
  }
  for (const auto& [s, xs] : out.values)
    for (const auto& [t, xt] : out.values) {
      auto it = out.values.find(s + t);
      if (it == out.values.end()) continue;
      out.semigroup_defect = std::max(out.semigroup_defect, op_norm(xs * xt - it->second));
    }
  return out;
}

}  // namespace wstar
