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

#include "wstar/bimodule.hpp"

#include <algorithm>

#include "wstar/errors.hpp"

namespace wstar {

namespace {

/** Kraus weights below this fraction of the largest are dropped. */
constexpr double kKrausCutoff = 1e-12;
/** Relative singular value cutoff for the span of the embedded generators. */
constexpr double kSpanCutoff = 1e-9;

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::StandardForm: return "standard_form";
    case Provenance::GnsTensor: return "gns_tensor";
    case Provenance::RelativeTensor: return "relative_tensor";
    case Provenance::Twisted: return "twisted";
    case Provenance::L2Path: return "l2_path";
  }
  return "unknown";
}

Mat Bimodule::left_action(const Vec& coords) const {
  Mat out = Mat::Zero(dimension, dimension);
  for (Eigen::Index k = 0; k < coords.size(); ++k)
    if (coords(k) != cplx(0.0)) out += coords(k) * left[k];
  return out;
}

Mat Bimodule::right_action(const Vec& coords) const {
  Mat out = Mat::Zero(dimension, dimension);
  for (Eigen::Index k = 0; k < coords.size(); ++k)
    if (coords(k) != cplx(0.0)) out += coords(k) * right[k];
  return out;
}

double BimoduleDefects::max() const {
  return std::max({left_multiplicative, left_adjoint, left_unital, right_multiplicative,
                   right_adjoint, right_unital, commutation});
}

BimoduleDefects check_bimodule(const Algebra& algebra, const Bimodule& b) {
  BimoduleDefects d;
  const int n = algebra.dim();
  const Mat id = Mat::Identity(b.dim(), b.dim());
  const Vec one = algebra.coords(algebra.identity());
  d.left_unital = (b.left_action(one) - id).norm();
  d.right_unital = (b.right_action(one) - id).norm();
  for (int i = 0; i < n; ++i) {
    const Vec adj = algebra.coords(algebra.basis(i).adjoint());
    d.left_adjoint = std::max(d.left_adjoint, (b.left_action(adj) - b.left[i].adjoint()).norm());
    d.right_adjoint = std::max(d.right_adjoint, (b.right_action(adj) - b.right[i].adjoint()).norm());
    for (int j = 0; j < n; ++j) {
      const Vec prod = algebra.coords(algebra.basis(i) * algebra.basis(j));
      d.left_multiplicative =
          std::max(d.left_multiplicative, (b.left_action(prod) - b.left[i] * b.left[j]).norm());
      d.right_multiplicative =
          std::max(d.right_multiplicative, (b.right_action(prod) - b.right[j] * b.right[i]).norm());
      d.commutation = std::max(d.commutation, (b.left[i] * b.right[j] - b.right[j] * b.left[i]).norm());
    }
  }
  return d;
}

Vec GnsTensor::vector(const Algebra& algebra, const Mat& x, const Vec& eta) const {
  return quotient * kron(algebra.coords(x), eta);
}

GnsTensor gns_tensor(const StandardForm& sf, const CpMap& t) {
  const Algebra& a = sf.algebra();
  const int d = a.dim();
  const int n = a.size();
  // Choi matrix of t after the block pinching, indexed by (p, r), (q, s).
  Mat choi = Mat::Zero(n * n, n * n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      Mat e = Mat::Zero(n, n);
      e(p, q) = 1.0;
      if (!a.is_element(e, 0.0)) continue;
      choi.block(p * n, q * n, n, n) = t(e);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (choi + choi.adjoint()));
  const RealVec& ev = es.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -1e-8 * top)
    throw NonCpError("Choi matrix is indefinite; the map is not completely positive");

  // Kraus operators with t(x) = sum_k K_k* x K_k; the GNS space embeds into
  // the tuples (x K_k eta)_k with the Hilbert-Schmidt product.
  std::vector<Mat> kraus;
  for (int i = 0; i < n * n; ++i) {
    if (ev(i) <= kKrausCutoff * top) continue;
    Mat k(n, n);
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r) k(p, r) = std::sqrt(ev(i)) * std::conj(es.eigenvectors()(p * n + r, i));
    kraus.push_back(std::move(k));
  }
  const int nk = static_cast<int>(kraus.size());
  const int amb = nk * n * n;
  auto flatten = [&](const std::vector<Mat>& ms) {
    Vec v(amb);
    for (int k = 0; k < nk; ++k)
      for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r) v(k * n * n + p * n + r) = ms[k](p, r);
    return v;
  };
  auto unflatten = [&](const Vec& v) {
    std::vector<Mat> ms(nk, Mat(n, n));
    for (int k = 0; k < nk; ++k)
      for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r) ms[k](p, r) = v(k * n * n + p * n + r);
    return ms;
  };
  Mat phi(amb, d * d);
  std::vector<Mat> ms(nk);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < nk; ++k) ms[k] = a.basis(i) * kraus[k] * a.basis(j);
      phi.col(i * d + j) = flatten(ms);
    }
  }
  const Mat q = amb > 0 ? column_span(phi, kSpanCutoff) : Mat(0, 0);

  auto space = std::make_shared<Bimodule>();
  space->provenance = Provenance::GnsTensor;
  space->dimension = static_cast<int>(q.cols());
  for (int e = 0; e < d; ++e) {
    Mat l(amb, q.cols()), r(amb, q.cols());
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
      std::vector<Mat> v = unflatten(q.col(c)), w = v;
      for (int k = 0; k < nk; ++k) {
        v[k] = a.basis(e) * v[k];
        w[k] = w[k] * a.basis(e);
      }
      l.col(c) = flatten(v);
      r.col(c) = flatten(w);
    }
    space->left.push_back(q.adjoint() * l);
    space->right.push_back(q.adjoint() * r);
  }
  GnsTensor out;
  out.quotient = q.adjoint() * phi;
  out.lift = pseudo_inverse(out.quotient, 1e-14);
  space->generators = out.quotient;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      space->generator_labels.push_back(a.basis_label(i) + "(x)f" + std::to_string(j));
  out.space = std::move(space);
  return out;
}

namespace {

// Coordinates of m_{ac} = pi(e_a)* pi(e_c) for orthonormal basis vectors of h,
// returned as one dH x dH matrix per algebra coordinate.
std::vector<Mat> inner_elements(const StandardForm& sf, const Bimodule& h) {
  const int d = sf.dim();
  const int dh = h.dim();
  // v_{ac}[i] = conj(Pi_i[c,a]) with Pi_i = right action of rho^{-1/2} f_i
  std::vector<Mat> v;
  v.reserve(d);
  for (int i = 0; i < d; ++i) v.push_back(h.right_action(sf.left_inv_sqrt_op().col(i)).adjoint());
  const Mat& w = sf.right_inv_sqrt_op();
  std::vector<Mat> m(d, Mat::Zero(dh, dh));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      if (w(k, i) != cplx(0.0)) m[k] += w(k, i) * v[i];
  return m;
}

}  // namespace

namespace {

// The summands kron(x_j, y_j) of the factorized quotient belonging to one block.
struct BlockTerms {
  Mat p;
  Mat q;
  std::vector<Mat> x;
  std::vector<Mat> y;
  int row = 0;
  int rows() const { return static_cast<int>(p.cols() * q.cols()); }
};

Mat stacked_quotient(const std::vector<BlockTerms>& blocks, int rows, int cols) {
  Mat out = Mat::Zero(rows, cols);
  for (const BlockTerms& b : blocks)
    for (std::size_t j = 0; j < b.x.size(); ++j) out.middleRows(b.row, b.rows()) += kron(b.x[j], b.y[j]);
  return out;
}

}  // namespace

RelativeTensor relative_tensor(const StandardForm& sf, BimodulePtr h, BimodulePtr k) {
  const Algebra& a = sf.algebra();
  const int d = a.dim();
  const int dh = h->dim(), dk = k->dim();

  // H (x)^M K = sum_b (H E^b_11) (x) (E^b_11 K) via
  // xi phi^{-1/2} eta -> sum_j pi(xi) E^b_j1 (x) E^b_1j eta.
  std::vector<BlockTerms> blocks;
  int rows = 0;
  for (int b = 0; b < a.num_blocks(); ++b) {
    BlockTerms t;
    t.p = column_span(h->right_action(Vec::Unit(d, a.coord_index(b, 0, 0))));
    t.q = column_span(k->left_action(Vec::Unit(d, a.coord_index(b, 0, 0))));
    if (t.p.cols() == 0 || t.q.cols() == 0) continue;
    for (int j = 0; j < a.blocks()[b]; ++j) {
      t.x.push_back(t.p.adjoint() * h->right_action(sf.left_inv_sqrt_op().col(a.coord_index(b, j, 0))));
      t.y.push_back(t.q.adjoint() * k->left_action(Vec::Unit(d, a.coord_index(b, 0, j))));
    }
    t.row = rows;
    rows += t.rows();
    blocks.push_back(std::move(t));
  }
  Mat psi = stacked_quotient(blocks, rows, dh * dk);

  // The factorization must reproduce the Gram matrix sum_r kron(m_r, L_K(f_r)).
  const std::vector<Mat> m = inner_elements(sf, *h);
  Rng rng(0x5eed);
  for (int probe = 0; probe < 2; ++probe) {
    const Mat v = random_matrix(rng, dk, dh);
    Mat gv = Mat::Zero(dk, dh);
    for (int r = 0; r < d; ++r)
      if (!m[r].isZero(0.0)) gv += k->left[r] * v * m[r].transpose();
    const Vec vv = Eigen::Map<const Vec>(v.data(), dh * dk);
    const Vec fv = psi.adjoint() * (psi * vv);
    const Vec gvv = Eigen::Map<const Vec>(gv.data(), dh * dk);
    if ((fv - gvv).norm() > 1e-8 * std::max(1.0, gvv.norm()))
      throw ConsistencyError("relative tensor inner products are inconsistent with the actions (residual " +
                             std::to_string((fv - gvv).norm() / std::max(1.0, gvv.norm())) + ")");
  }

  // Blocks are mutually orthogonal, so psi psi* is block diagonal.
  bool onto = true;
  std::vector<Mat> gram_inverse;
  for (const BlockTerms& b : blocks) {
    Mat g = Mat::Zero(b.rows(), b.rows());
    for (std::size_t i = 0; i < b.x.size(); ++i)
      for (std::size_t j = 0; j < b.x.size(); ++j)
        g += kron(Mat(b.x[i] * b.x[j].adjoint()), Mat(b.y[i] * b.y[j].adjoint()));
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.adjoint()));
    const auto& ev = es.eigenvalues();
    if (ev.size() == 0 || ev(0) <= 1e-10 * ev(ev.size() - 1)) {
      onto = false;
      break;
    }
    gram_inverse.push_back(es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint());
  }

  auto space = std::make_shared<Bimodule>();
  space->provenance = Provenance::RelativeTensor;
  Mat lift;
  if (onto) {
    lift = Mat::Zero(dh * dk, rows);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const BlockTerms& b = blocks[i];
      Mat adj = Mat::Zero(dh * dk, b.rows());
      for (std::size_t j = 0; j < b.x.size(); ++j) adj += kron(Mat(b.x[j].adjoint()), Mat(b.y[j].adjoint()));
      lift.middleCols(b.row, b.rows()) = adj * gram_inverse[i];
    }
    space->dimension = rows;
    for (int r = 0; r < d; ++r) {
      Mat l = Mat::Zero(rows, rows);
      Mat rr = Mat::Zero(rows, rows);
      for (const BlockTerms& b : blocks) {
        const Mat ir = Mat::Identity(b.p.cols(), b.p.cols());
        const Mat iq = Mat::Identity(b.q.cols(), b.q.cols());
        l.block(b.row, b.row, b.rows(), b.rows()) = kron(Mat(b.p.adjoint() * h->left[r] * b.p), iq);
        rr.block(b.row, b.row, b.rows(), b.rows()) = kron(ir, Mat(b.q.adjoint() * k->right[r] * b.q));
      }
      space->left.push_back(l);
      space->right.push_back(rr);
    }
  } else {
    psi = column_span(psi, 1e-10).adjoint() * psi;
    const int rank = static_cast<int>(psi.rows());
    lift = psi.adjoint() * (psi * psi.adjoint()).inverse();
    space->dimension = rank;
    const Mat idh = Mat::Identity(dh, dh), idk = Mat::Identity(dk, dk);
    for (int r = 0; r < d; ++r) {
      space->left.push_back(psi * kron(h->left[r], idk) * lift);
      space->right.push_back(psi * kron(idh, k->right[r]) * lift);
    }
  }
  space->generators = psi;
  RelativeTensor out;
  out.left_factor = std::move(h);
  out.right_factor = std::move(k);
  out.space = std::move(space);
  out.quotient = std::move(psi);
  out.lift = std::move(lift);
  return out;
}

Mat tensor_maps(const RelativeTensor& source, const RelativeTensor& target, const Mat& a, const Mat& b) {
  return target.quotient * kron(a, b) * source.lift;
}

Mat inner_element(const StandardForm& sf, const Bimodule& h, const Vec& xi1, const Vec& xi2) {
  const Mat op = pi_phi(sf, h, xi1).adjoint() * pi_phi(sf, h, xi2);
  return sf.element_from_left_operator(op);
}

double check_prop_formula(const StandardForm& sf, const CpMap& t, const Mat& x1, const Mat& y1,
                          const Mat& x2, const Mat& y2) {
  const Algebra& a = sf.algebra();
  const GnsTensor g = gns_tensor(sf, t);
  const Vec xi1 = g.vector(a, x1, sf.right_embed(y1));
  const Vec xi2 = g.vector(a, x2, sf.right_embed(y2));
  const Mat op = pi_phi(sf, *g.space, xi1).adjoint() * pi_phi(sf, *g.space, xi2);
  const Mat expected = a.left_mult(y1.adjoint() * t(x1.adjoint() * x2) * y2);
  return (op - expected).norm();
}

MapReport verify_map(const BimoduleMap& f, MapFlags flags, double tol) {
  MapReport r;
  const Bimodule& s = *f.source;
  const Bimodule& t = *f.target;
  if (f.matrix.rows() != t.dim() || f.matrix.cols() != s.dim())
    throw DomainError("map matrix does not match its source and target");
  if (flags.bilinear) {
    for (std::size_t k = 0; k < s.left.size(); ++k) {
      r.bilinear_defect = std::max(r.bilinear_defect, (f.matrix * s.left[k] - t.left[k] * f.matrix).norm());
      r.bilinear_defect = std::max(r.bilinear_defect, (f.matrix * s.right[k] - t.right[k] * f.matrix).norm());
    }
    r.pass = r.pass && r.bilinear_defect <= tol;
  }
  if (flags.isometric || flags.unitary) {
    r.isometric_defect = (f.matrix.adjoint() * f.matrix - Mat::Identity(s.dim(), s.dim())).norm();
    if (flags.isometric) r.pass = r.pass && r.isometric_defect <= tol;
  }
  if (flags.unitary) {
    if (s.dim() != t.dim()) {
      r.unitary_defect = INFINITY;
    } else {
      r.unitary_defect = std::max(r.isometric_defect,
                                  (f.matrix * f.matrix.adjoint() - Mat::Identity(t.dim(), t.dim())).norm());
    }
    r.pass = r.pass && r.unitary_defect <= tol;
  }
  return r;
}

Mat map_from_family(const Mat& source, const Mat& target, double tol) {
  if (source.cols() != target.cols()) throw DomainError("families have different lengths");
  const Mat a = target * pseudo_inverse(source, 1e-10);
  const double scale = std::max(1.0, target.colwise().norm().maxCoeff());
  const double residual = (a * source - target).norm();
  if (residual > tol * scale * std::sqrt(static_cast<double>(source.cols())))
    throw ConsistencyError("images do not respect the relations of the spanning family (residual " +
                           std::to_string(residual) + ")");
  return a;
}

}  // namespace wstar
