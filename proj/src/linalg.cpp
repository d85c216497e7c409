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

#include "wstar/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <complex>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "wstar/errors.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace wstar {

GramQuotient gram_quotient(const Mat& gram, double rel_cutoff) {
  const Mat herm = 0.5 * (gram + gram.adjoint());
  GramQuotient out;
  const auto n = herm.rows();
  if (n == 0) {
    out.quotient = Mat(0, 0);
    out.lift = Mat(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  const RealVec& ev = es.eigenvalues();
  out.spectrum = ev;
  const double top = ev.maxCoeff();
  if (top <= 0.0) {
    out.min_relative_eigenvalue = top < 0.0 ? -1.0 : 0.0;
    out.quotient = Mat(0, n);
    out.lift = Mat(n, 0);
    return out;
  }
  out.min_relative_eigenvalue = ev.minCoeff() / top;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (ev(i) > rel_cutoff * top) keep.push_back(i);
  }
  const auto r = static_cast<Eigen::Index>(keep.size());
  out.quotient.resize(r, n);
  out.lift.resize(n, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const double s = ev(keep[k]);
    const auto v = es.eigenvectors().col(keep[k]);
    out.quotient.row(k) = std::sqrt(s) * v.adjoint();
    out.lift.col(k) = v / std::sqrt(s);
  }
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out = Eigen::kroneckerProduct(a, b);
  return out;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

double min_hermitian_eigenvalue(const Mat& a) {
  if (a.size() == 0) return 0.0;
  const Mat herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

struct ThinSvd {
  Mat u;
  RealVec s;
  Mat v;
};

// Thin SVD through LAPACK zgesvd. With vectors == false only s is filled.
ThinSvd thin_svd(const Mat& a, bool vectors = true) {
  const auto m = static_cast<lapack_int>(a.rows());
  const auto n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  Mat work = a;
  ThinSvd out;
  out.s.resize(k);
  RealVec superb(std::max<lapack_int>(k - 1, 1));
  const char job = vectors ? 'S' : 'N';
  if (vectors) {
    out.u.resize(m, k);
    out.v.resize(k, n);
  }
  auto* ptr = reinterpret_cast<lapack_complex_double*>(work.data());
  auto* up = vectors ? reinterpret_cast<lapack_complex_double*>(out.u.data()) : nullptr;
  auto* vp = vectors ? reinterpret_cast<lapack_complex_double*>(out.v.data()) : nullptr;
  const lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, job, job, m, n, ptr, m, out.s.data(), up,
                                         std::max<lapack_int>(m, 1), vp, std::max<lapack_int>(k, 1),
                                         superb.data());
  if (info != 0) throw ConsistencyError("zgesvd failed with info " + std::to_string(info));
  if (vectors) out.v = out.v.adjoint().eval();
  return out;
}

}  // namespace

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return thin_svd(a, false).s(0);
}

int numerical_rank(const Mat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  const RealVec s = thin_svd(a, false).s;
  if (s(0) <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

Mat column_span(const Mat& a, double rel_tol) {
  if (a.size() == 0) return Mat(a.rows(), 0);
  const ThinSvd svd = thin_svd(a);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.s.size(); ++i)
    if (svd.s(0) > 0.0 && svd.s(i) > rel_tol * svd.s(0)) ++r;
  return svd.u.leftCols(r);
}

Mat null_space(const Mat& a, double abs_tol) {
  const auto n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const RealVec& s = svd.singularValues();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > abs_tol) ++r;
  return svd.matrixV().rightCols(n - r);
}

Mat pseudo_inverse(const Mat& a, double rel_tol) {
  if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
  const ThinSvd svd = thin_svd(a);
  const RealVec& s = svd.s;
  RealVec inv = RealVec::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) inv(i) = 1.0 / s(i);
  return svd.v * inv.cast<cplx>().asDiagonal() * svd.u.adjoint();
}

Mat polar_unitary(const Mat& a) {
  if (a.rows() != a.cols()) throw DomainError("polar_unitary needs a square matrix");
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

namespace {

Mat spectral_apply(const Mat& a, double (*f)(double)) {
  const Mat herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  RealVec d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(d(i));
  return es.eigenvectors() * d.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Mat psd_sqrt(const Mat& a) {
  return spectral_apply(a, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

Mat psd_inverse_sqrt(const Mat& a) {
  return spectral_apply(a, [](double x) {
    if (x <= 0.0) throw DomainError("psd_inverse_sqrt of a singular matrix");
    return 1.0 / std::sqrt(x);
  });
}

Mat expm(const Mat& a, double eig_cond_bound) {
  const auto n = a.rows();
  if (n == 0) return a;
  if (a.isZero(0.0)) return Mat::Identity(n, n);
  Eigen::ComplexEigenSolver<Mat> es(a);
  if (es.info() == Eigen::Success) {
    const Mat& v = es.eigenvectors();
    Eigen::JacobiSVD<Mat> svd(v);
    const RealVec& s = svd.singularValues();
    const double cond = s(n - 1) > 0.0 ? s(0) / s(n - 1) : INFINITY;
    if (cond <= eig_cond_bound) {
      Vec d = es.eigenvalues().array().exp();
      return v * d.asDiagonal() * v.inverse();
    }
  }
  Mat out = a.exp();
  return out;
}

Mat random_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

Mat random_hermitian(Rng& rng, int n) {
  const Mat m = random_matrix(rng, n, n);
  return 0.5 * (m + m.adjoint());
}

Mat random_unitary(Rng& rng, int n) {
  const Mat m = random_matrix(rng, n, n);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  return q;
}

}  // namespace wstar
