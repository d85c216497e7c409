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

#include <Eigen/Dense>
#include <complex>
#include <random>

namespace wstar {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using Rng = std::mt19937_64;

/**
 * Orthonormal coordinates for the quotient of a spanning family by the null
 * space of its Gram matrix.
 *
 * If G = V diag(s) V* is the Gram matrix of n formal vectors, `quotient` is
 * diag(s_r)^{1/2} V_r* (r x n) and `lift` is V_r diag(s_r)^{-1/2} (n x r),
 * so quotient * lift = I_r and quotient* quotient reproduces G up to the
 * discarded directions.
 */
struct GramQuotient {
  Mat quotient;
  Mat lift;
  RealVec spectrum;
  /** Smallest eigenvalue divided by the largest one (negative if indefinite). */
  double min_relative_eigenvalue = 0.0;
  int rank() const { return static_cast<int>(quotient.rows()); }
};

GramQuotient gram_quotient(const Mat& gram, double rel_cutoff = 1e-10);

Mat kron(const Mat& a, const Mat& b);
Vec kron(const Vec& a, const Vec& b);

/** Largest singular value. */
double op_norm(const Mat& a);
/** Smallest eigenvalue of the Hermitian part. */
double min_hermitian_eigenvalue(const Mat& a);

/** Numerical rank relative to the largest singular value. */
int numerical_rank(const Mat& a, double rel_tol = 1e-10);
/** Orthonormal basis for the column span. */
Mat column_span(const Mat& a, double rel_tol = 1e-10);
/** Orthonormal basis of the null space using an absolute singular value cutoff. */
Mat null_space(const Mat& a, double abs_tol);
Mat pseudo_inverse(const Mat& a, double rel_tol = 1e-12);

/** Nearest unitary in Frobenius norm (polar factor); requires a square input. */
Mat polar_unitary(const Mat& a);
Mat psd_sqrt(const Mat& a);
Mat psd_inverse_sqrt(const Mat& a);

/**
 * exp(a). Uses a unitary-like eigendecomposition when the eigenvector matrix
 * is well conditioned (condition number at most `eig_cond_bound`), otherwise
 * Pade-13 scaling and squaring.
 */
Mat expm(const Mat& a, double eig_cond_bound = 10.0);

Mat random_matrix(Rng& rng, int rows, int cols);
Mat random_hermitian(Rng& rng, int n);
Mat random_unitary(Rng& rng, int n);

}  // namespace wstar
