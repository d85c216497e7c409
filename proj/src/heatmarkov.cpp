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

#include "wstar/heatmarkov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <regex>

#include <Eigen/Eigenvalues>

#include "wstar/errors.hpp"

namespace wstar {

MarkovModel::MarkovModel(RealVec mu, RealMat laplacian) : mu_(std::move(mu)), laplacian_(std::move(laplacian)) {
  const int m = static_cast<int>(mu_.size());
  if (m < 1) throw DomainError("a Markov model needs at least one state");
  if (laplacian_.rows() != m || laplacian_.cols() != m) throw DomainError("Laplacian size does not match mu");
  if (mu_.minCoeff() <= 0.0) throw DomainError("state weights must be positive");
  mu_ /= mu_.sum();
  const double scale = std::max(1.0, laplacian_.cwiseAbs().maxCoeff());
  for (int x = 0; x < m; ++x) {
    if (std::abs(laplacian_.row(x).sum()) > 1e-12 * scale) throw DomainError("Laplacian must annihilate constants");
    for (int y = 0; y < m; ++y) {
      if (x != y && laplacian_(x, y) > 1e-15 * scale)
        throw DomainError("Laplacian off-diagonal entries must be non-positive");
      if (std::abs(mu_(x) * laplacian_(x, y) - mu_(y) * laplacian_(y, x)) > 1e-12 * scale)
        throw DomainError("Laplacian is not symmetric in L^2(mu)");
    }
  }
  const RealVec s = mu_.cwiseSqrt();
  const RealVec si = s.cwiseInverse();
  RealMat sym = s.asDiagonal() * laplacian_ * si.asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RealMat> es(sym);
  spectrum_ = es.eigenvalues();
  eigvecs_ = es.eigenvectors();
}

namespace {

RealMat graph_laplacian(int m, const std::vector<std::pair<int, int>>& edges) {
  RealMat l = RealMat::Zero(m, m);
  for (auto [a, b] : edges) {
    l(a, b) -= 1.0;
    l(b, a) -= 1.0;
    l(a, a) += 1.0;
    l(b, b) += 1.0;
  }
  return l;
}

}  // namespace

MarkovModel MarkovModel::cycle(int m) {
  if (m < 3) throw DomainError("cycle graphs need at least three states");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < m; ++i) e.emplace_back(i, (i + 1) % m);
  return MarkovModel(RealVec::Constant(m, 1.0 / m), graph_laplacian(m, e));
}

MarkovModel MarkovModel::path(int m) {
  if (m < 1) throw DomainError("path graphs need at least one state");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < m; ++i) e.emplace_back(i, i + 1);
  return MarkovModel(RealVec::Constant(m, 1.0 / m), graph_laplacian(m, e));
}

MarkovModel MarkovModel::complete(int m) {
  if (m < 1) throw DomainError("complete graphs need at least one state");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) e.emplace_back(i, j);
  return MarkovModel(RealVec::Constant(m, 1.0 / m), graph_laplacian(m, e));
}

MarkovModel MarkovModel::named(const std::string& spec) {
  static const std::regex re(R"(\s*(cycle|path|complete)\s*\(\s*(\d+)\s*\)\s*)");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) throw DomainError("unknown graph '" + spec + "'");
  const int n = std::stoi(m[2]);
  if (m[1] == "cycle") return cycle(n);
  if (m[1] == "path") return path(n);
  return complete(n);
}

RealMat MarkovModel::transition(double t) const {
  if (t < 0.0) throw DomainError("negative time");
  const RealVec s = mu_.cwiseSqrt();
  const RealVec e = (-t * spectrum_).array().exp();
  return s.cwiseInverse().asDiagonal() * eigvecs_ * e.asDiagonal() * eigvecs_.transpose() * s.asDiagonal();
}

RealMat MarkovModel::kernel(double t) const {
  if (t <= 0.0) throw DomainError("heat kernels are defined for t > 0");
  return transition(t) * mu_.cwiseInverse().asDiagonal();
}

Algebra MarkovModel::algebra() const { return Algebra(std::vector<int>(states(), 1)); }

StandardForm MarkovModel::standard_form() const {
  const Algebra a = algebra();
  std::vector<double> w(mu_.data(), mu_.data() + mu_.size());
  return StandardForm(a, State::diagonal(a, w));
}

CpSemigroup MarkovModel::semigroup() const { return CpSemigroup(algebra(), Mat(-laplacian_.cast<cplx>())); }

double chapman_kolmogorov_defect(const MarkovModel& model, double s, double t) {
  const RealMat lhs = model.kernel(s + t);
  const RealMat rhs = model.kernel(s) * model.mu().asDiagonal() * model.kernel(t);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

KernelReport kernel_report(const MarkovModel& model, const std::vector<double>& times) {
  KernelReport r;
  r.min_entry = INFINITY;
  for (double t : times) {
    const RealMat p = model.kernel(t);
    r.symmetry_defect = std::max(r.symmetry_defect, (p - p.transpose()).cwiseAbs().maxCoeff());
    const RealVec mass = p * model.mu();
    r.mass_defect = std::max(r.mass_defect, (mass.array() - 1.0).abs().maxCoeff());
    r.min_entry = std::min(r.min_entry, p.minCoeff());
  }
  for (double s : times)
    for (double t : times) r.chapman_kolmogorov_defect = std::max(r.chapman_kolmogorov_defect, chapman_kolmogorov_defect(model, s, t));
  return r;
}

std::size_t tuple_index(int states, const std::vector<int>& xs) {
  std::size_t idx = 0;
  for (int x : xs) {
    if (x < 0 || x >= states) throw DomainError("state index out of range");
    idx = idx * states + x;
  }
  return idx;
}

std::vector<int> tuple_of(int states, int arity, std::size_t index) {
  std::vector<int> xs(arity);
  for (int i = arity - 1; i >= 0; --i) {
    xs[i] = static_cast<int>(index % states);
    index /= states;
  }
  return xs;
}

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

PathFunction PathFunction::constant(int states, int arity, cplx c) {
  return PathFunction{states, arity, std::vector<cplx>(ipow(states, arity), c)};
}

PathFunction PathFunction::from_state_function(const Vec& f) {
  return PathFunction{static_cast<int>(f.size()), 1, std::vector<cplx>(f.data(), f.data() + f.size())};
}

cplx PathFunction::operator()(const std::vector<int>& xs) const {
  if (static_cast<int>(xs.size()) != arity) throw DomainError("wrong number of variables");
  return values[tuple_index(states, xs)];
}

PathFunction box(const PathFunction& f, const PathFunction& g) {
  if (f.states != g.states) throw DomainError("box of functions on different state spaces");
  if (f.arity < 1 || g.arity < 1) throw DomainError("box needs functions of at least one variable");
  if (f.values.size() != ipow(f.states, f.arity) || g.values.size() != ipow(g.states, g.arity))
    throw DomainError("function values do not match the declared shape");
  const int m = f.states;
  const std::size_t tail = ipow(m, g.arity - 1);
  PathFunction out{m, f.arity + g.arity - 1, {}};
  out.values.resize(f.values.size() * tail);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const std::size_t shared = i % m;
    for (std::size_t j = 0; j < tail; ++j) out.values[i * tail + j] = f.values[i] * g.values[shared * tail + j];
  }
  return out;
}

double PathMeasure::mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

PathMeasure path_measure(const MarkovModel& model, const Partition& p) {
  const int m = model.states();
  const int arity = static_cast<int>(p.size()) + 1;
  std::vector<RealMat> kernels;
  for (const Rational& t : p.parts()) kernels.push_back(model.kernel(to_double(t)));
  PathMeasure out{p, m, {}};
  out.weights.resize(ipow(m, arity));
  for (std::size_t idx = 0; idx < out.weights.size(); ++idx) {
    const std::vector<int> xs = tuple_of(m, arity, idx);
    double w = 1.0;
    for (int i = 0; i < arity; ++i) w *= model.mu()(xs[i]);
    for (std::size_t i = 0; i < kernels.size(); ++i) w *= kernels[i](xs[i], xs[i + 1]);
    out.weights[idx] = w;
  }
  return out;
}

double marginal_defect(const MarkovModel& model, const Partition& p) {
  const int m = model.states();
  const int n = static_cast<int>(p.size());
  const PathMeasure full = path_measure(model, p);
  double worst = 0.0;
  for (int drop = 1; drop < n; ++drop) {
    std::vector<Rational> parts;
    for (int i = 0; i < n; ++i) {
      if (i == drop) {
        parts.back() += p[i];
      } else {
        parts.push_back(p[i]);
      }
    }
    const PathMeasure coarse = path_measure(model, Partition(parts));
    std::vector<double> marg(coarse.weights.size(), 0.0);
    for (std::size_t idx = 0; idx < full.weights.size(); ++idx) {
      std::vector<int> xs = tuple_of(m, n + 1, idx);
      xs.erase(xs.begin() + drop);
      marg[tuple_index(m, xs)] += full.weights[idx];
    }
    for (std::size_t i = 0; i < marg.size(); ++i) worst = std::max(worst, std::abs(marg[i] - coarse.weights[i]));
  }
  return worst;
}

HeatPathSystem::HeatPathSystem(MarkovModel model)
    : ProductSystem(model.standard_form()), model_(std::move(model)) {}

const std::vector<double>& HeatPathSystem::measure(const Partition& p) const {
  std::lock_guard<std::recursive_mutex> lock(mutex());
  auto it = measures_.find(p);
  if (it != measures_.end()) return it->second;
  PathMeasure pm = path_measure(model_, p);
  for (double w : pm.weights)
    if (w <= 0.0) throw DomainError("path measure at " + p.str() + " is not faithful");
  return measures_.emplace(p, std::move(pm.weights)).first->second;
}

Vec HeatPathSystem::to_coords(const Partition& p, const PathFunction& f) const {
  const std::vector<double>& w = measure(p);
  if (f.states != model_.states() || f.arity != static_cast<int>(p.size()) + 1)
    throw DomainError("function shape does not match " + p.str());
  Vec c(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) c(i) = f.values[i] * std::sqrt(w[i]);
  return c;
}

PathFunction HeatPathSystem::from_coords(const Partition& p, const Vec& c) const {
  const std::vector<double>& w = measure(p);
  if (c.size() != static_cast<Eigen::Index>(w.size())) throw DomainError("coordinate vector does not match " + p.str());
  PathFunction f{model_.states(), static_cast<int>(p.size()) + 1, {}};
  f.values.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) f.values[i] = c(i) / std::sqrt(w[i]);
  return f;
}

BimodulePtr HeatPathSystem::build_fiber(const Partition& p) const {
  const int m = model_.states();
  const int arity = static_cast<int>(p.size()) + 1;
  const std::size_t dim = measure(p).size();
  auto b = std::make_shared<Bimodule>();
  b->provenance = Provenance::L2Path;
  b->dimension = static_cast<int>(dim);
  for (int k = 0; k < m; ++k) {
    Vec first = Vec::Zero(dim);
    Vec last = Vec::Zero(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const std::vector<int> xs = tuple_of(m, arity, i);
      if (xs.front() == k) first(i) = 1.0;
      if (xs.back() == k) last(i) = 1.0;
    }
    b->left.push_back(first.asDiagonal());
    b->right.push_back(last.asDiagonal());
  }
  b->generators = Mat::Identity(b->dimension, b->dimension);
  for (std::size_t i = 0; i < dim; ++i) {
    std::string label = "(";
    const std::vector<int> xs = tuple_of(m, arity, i);
    for (int j = 0; j < arity; ++j) label += (j ? "," : "") + std::to_string(xs[j]);
    b->generator_labels.push_back(label + ")");
  }
  return b;
}

Mat HeatPathSystem::build_product(const Partition& q, const Partition& p) const {
  const int m = model_.states();
  const std::size_t dq = measure(q).size();
  const std::size_t dp = measure(p).size();
  const std::size_t tail = dp / m;
  const Partition qp = join(q, p);
  const std::size_t dt = measure(qp).size();
  Mat f = Mat::Zero(static_cast<Eigen::Index>(dt), static_cast<Eigen::Index>(dq * dp));
  for (std::size_t i = 0; i < dq; ++i) {
    const std::size_t y = i % m;
    const double scale = 1.0 / std::sqrt(model_.mu()(y));
    for (std::size_t j = 0; j < tail; ++j) f(i * tail + j, i * dp + y * tail + j) = scale;
  }
  return f * fusion(q, p)->lift;
}

Mat HeatPathSystem::build_refine(const Partition& fine, const Partition& coarse) const {
  const int m = model_.states();
  const std::vector<Partition> groups = refinement_groups(fine, coarse);
  std::vector<int> keep;
  int pos = 0;
  for (const Partition& g : groups) {
    keep.push_back(pos);
    pos += static_cast<int>(g.size());
  }
  keep.push_back(pos);
  const std::vector<double>& wf = measure(fine);
  const std::vector<double>& wc = measure(coarse);
  Mat a = Mat::Zero(static_cast<Eigen::Index>(wf.size()), static_cast<Eigen::Index>(wc.size()));
  const int arity = static_cast<int>(fine.size()) + 1;
  for (std::size_t i = 0; i < wf.size(); ++i) {
    const std::vector<int> xs = tuple_of(m, arity, i);
    std::vector<int> sel;
    for (int k : keep) sel.push_back(xs[k]);
    const std::size_t j = tuple_index(m, sel);
    a(i, j) = std::sqrt(wf[i] / wc[j]);
  }
  return a;
}

Vec HeatPathSystem::build_unit(const Partition& p) const {
  const std::vector<double>& w = measure(p);
  Vec c(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) c(i) = std::sqrt(w[i]);
  return c;
}

namespace {

/** Calls f for every tuple in {0..base-1}^length. */
void for_each_tuple(int base, int length, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(length, 0);
  while (true) {
    f(idx);
    int pos = length - 1;
    while (pos >= 0 && ++idx[pos] == base) idx[pos--] = 0;
    if (pos < 0) return;
  }
}

struct WordFamily {
  Mat cells;
  Mat paths;
};

WordFamily word_family(const CellSystem& cells, const HeatPathSystem& paths, const Partition& p) {
  if (p.empty()) throw DomainError("word families need a non-empty partition");
  const Algebra& a = cells.algebra();
  const int m = paths.model().states();
  if (a.dim() != m) throw DomainError("cell system and path model act on different algebras");
  const int n = static_cast<int>(p.size());
  // Interior g_i are held at 1 when m^{2n} exceeds 4096.
  const bool full = ipow(m, 2 * n) <= 4096;
  const int length = full ? 2 * n : n + 1;
  std::vector<Vec> src;
  std::vector<Vec> dst;
  const std::vector<double>& w = paths.measure(p);
  for_each_tuple(m, length, [&](const std::vector<int>& idx) {
    std::vector<Mat> xs(n);
    std::vector<Mat> ys(n, a.identity());
    std::vector<int> fs(n);
    std::vector<int> gs(n, -1);
    for (int i = 0; i < n; ++i) {
      fs[i] = full ? idx[2 * i] : idx[i];
      if (full) gs[i] = idx[2 * i + 1];
    }
    if (!full) gs[n - 1] = idx[n];
    for (int i = 0; i < n; ++i) {
      xs[i] = a.basis(fs[i]);
      if (gs[i] >= 0) ys[i] = a.basis(gs[i]);
    }
    src.push_back(cells.word(p, xs, ys));
    // f_1(x_1) g_1(x_2) f_2(x_2) ... f_n(x_n) g_n(x_{n+1}) with indicators is supported on at most one tuple.
    Vec v = Vec::Zero(static_cast<Eigen::Index>(w.size()));
    std::vector<int> tuple(n + 1);
    bool ok = true;
    tuple[0] = fs[0];
    for (int i = 1; i < n && ok; ++i) {
      if (gs[i - 1] >= 0 && gs[i - 1] != fs[i]) ok = false;
      tuple[i] = fs[i];
    }
    if (ok) {
      for_each_tuple(m, 1, [&](const std::vector<int>& last) {
        if (gs[n - 1] >= 0 && gs[n - 1] != last[0]) return;
        tuple[n] = last[0];
        const std::size_t k = tuple_index(m, tuple);
        v(k) += std::sqrt(w[k]);
      });
    }
    dst.push_back(v);
  });
  WordFamily out;
  out.cells = Mat(src.front().size(), static_cast<Eigen::Index>(src.size()));
  out.paths = Mat(dst.front().size(), static_cast<Eigen::Index>(dst.size()));
  for (std::size_t c = 0; c < src.size(); ++c) {
    out.cells.col(c) = src[c];
    out.paths.col(c) = dst[c];
  }
  return out;
}

}  // namespace

CellComparison compare_heat_cells(const CellSystem& cells, const HeatPathSystem& paths, const Partition& p) {
  const WordFamily wf = word_family(cells, paths, p);
  CellComparison out;
  out.partition = p;
  out.cell_dim = cells.fiber(p)->dim();
  out.path_dim = paths.fiber(p)->dim();
  const Mat gc = wf.cells.adjoint() * wf.cells;
  const Mat gp = wf.paths.adjoint() * wf.paths;
  out.gram_defect = (gc - gp).cwiseAbs().maxCoeff();
  const Mat u = map_from_family(wf.cells, wf.paths);
  out.iso = verify_map(BimoduleMap{cells.fiber(p), paths.fiber(p), u}, MapFlags{true, false, true});
  return out;
}

Mat cell_to_path_map(const CellSystem& cells, const HeatPathSystem& paths, const Partition& p) {
  const WordFamily wf = word_family(cells, paths, p);
  return map_from_family(wf.cells, wf.paths);
}

double refinement_compatibility(const CellSystem& cells, const HeatPathSystem& paths, const Partition& fine,
                                const Partition& coarse) {
  const Mat uf = cell_to_path_map(cells, paths, fine);
  const Mat uc = cell_to_path_map(cells, paths, coarse);
  return op_norm(uf * cells.refine(fine, coarse) - paths.refine(fine, coarse) * uc);
}

PathFunction b_adjoint_formula(const MarkovModel& model, const Partition& p, const PathFunction& f) {
  const int n = static_cast<int>(p.size());
  if (n < 1) throw DomainError("the adjoint formula needs a non-empty partition");
  const int m = model.states();
  if (f.states != m || f.arity != n + 1) throw DomainError("function shape does not match " + p.str());
  const PathMeasure prev = path_measure(model, p.prefix(n - 1));
  const RealMat last = model.kernel(to_double(p[n - 1]));
  PathFunction out = PathFunction::constant(m, 1, 0.0);
  for (std::size_t i = 0; i < prev.weights.size(); ++i) {
    const int xn = static_cast<int>(i % m);
    for (int y = 0; y < m; ++y) out.values[y] += f.values[i * m + y] * last(xn, y) * prev.weights[i];
  }
  return out;
}

Mat b_embedding(const ProductSystem& system, const Partition& p) {
  const int d = system.algebra().dim();
  const auto f = system.fusion(p, Partition());
  const Vec u = system.unit(p);
  Mat col(u.size(), 1);
  col.col(0) = u;
  return system.product(p, Partition()) * f->quotient * kron(col, Mat(Mat::Identity(d, d)));
}

double b_adjoint_defect(const HeatPathSystem& paths, const Partition& p, const std::vector<PathFunction>& fs) {
  const Mat b = b_embedding(paths, p);
  double worst = 0.0;
  for (const PathFunction& f : fs) {
    const PathFunction lhs = paths.from_coords(Partition(), b.adjoint() * paths.to_coords(p, f));
    const PathFunction rhs = b_adjoint_formula(paths.model(), p, f);
    for (std::size_t y = 0; y < lhs.values.size(); ++y) worst = std::max(worst, std::abs(lhs.values[y] - rhs.values[y]));
  }
  return worst;
}

std::vector<PathDilationEntry> check_path_dilation(std::shared_ptr<const HeatPathSystem> paths, const Rational& delta,
                                                   int levels) {
  const TruncatedLimit tl(paths, delta, levels);
  const MarkovModel& model = paths->model();
  const Algebra& a = paths->algebra();
  const int m = model.states();
  const CpSemigroup sem = model.semigroup();
  std::vector<PathDilationEntry> out;
  for (int k = 1; k <= levels; ++k) {
    const Rational t = delta * static_cast<std::int64_t>(k);
    const Partition level = tl.level_partition(k);
    const RealMat trans = model.transition(to_double(t));
    for (int e = 0; e < m; ++e) {
      PathDilationEntry entry;
      entry.k = k;
      entry.basis = e;
      entry.operator_defect = compression_defect(tl, sem.evaluate(t), k, a.basis(e));
      const TruncOp th = tl.dilate(k, tl.represent(a.basis(e)));
      for (int g = 0; g < m; ++g) {
        PathFunction fg = PathFunction::constant(m, k + 1, 0.0);
        for (std::size_t i = 0; i < fg.values.size(); ++i) {
          const std::vector<int> xs = tuple_of(m, k + 1, i);
          if (xs.front() == e && xs.back() == g) fg.values[i] = 1.0;
        }
        const PathFunction lhs = b_adjoint_formula(model, level, fg);
        for (int y = 0; y < m; ++y) {
          const double expected = y == g ? trans(y, e) : 0.0;
          entry.formula_defect = std::max(entry.formula_defect, std::abs(lhs.values[y] - expected));
        }
        const Vec g_coords = paths->to_coords(Partition(), PathFunction::from_state_function(Vec::Unit(m, g)));
        const Vec orbit = th.op * (tl.kappa(0) * g_coords);
        const Vec target = tl.kappa(k) * paths->to_coords(level, fg);
        entry.orbit_defect = std::max(entry.orbit_defect, (orbit - target).norm());
      }
      out.push_back(entry);
    }
  }
  return out;
}

}  // namespace wstar
