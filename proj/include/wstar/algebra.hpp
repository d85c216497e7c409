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

#include <string>
#include <vector>

#include "wstar/linalg.hpp"

namespace wstar {

class Bimodule;

/**
 * A finite-dimensional von Neumann algebra M_{n_1} + ... + M_{n_k}.
 *
 * Elements are stored as block-diagonal N x N matrices, N = sum n_i. The
 * coordinate basis is the list of matrix units E^b_{ij}, block by block and
 * row-major inside a block; it is orthonormal for the Hilbert-Schmidt product.
 */
class Algebra {
 public:
  explicit Algebra(std::vector<int> block_sizes);

  const std::vector<int>& blocks() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  /** Size N of the ambient matrices. */
  int size() const { return size_; }
  /** Number of matrix units, sum n_i^2. */
  int dim() const { return dim_; }
  int block_offset(int b) const { return block_offset_[b]; }
  int coord_offset(int b) const { return coord_offset_[b]; }
  int coord_index(int b, int i, int j) const;

  Mat zero() const;
  Mat identity() const;
  const Mat& basis(int k) const { return basis_[k]; }
  const std::vector<Mat>& basis() const { return basis_; }
  std::string basis_label(int k) const;

  Vec coords(const Mat& x) const;
  Mat element(const Vec& c) const;
  /** Max modulus of entries outside the block pattern. */
  double off_block_defect(const Mat& x) const;
  bool is_element(const Mat& x, double tol = 1e-12) const {
    return x.rows() == size_ && x.cols() == size_ && off_block_defect(x) <= tol;
  }

  /** Coordinate matrix of xi -> x xi. */
  Mat left_mult(const Mat& x) const;
  /** Coordinate matrix of xi -> xi y. */
  Mat right_mult(const Mat& y) const;

  Mat random_element(Rng& rng) const;
  bool operator==(const Algebra& o) const { return blocks_ == o.blocks_; }

 private:
  std::vector<int> blocks_;
  std::vector<int> block_offset_;
  std::vector<int> coord_offset_;
  std::vector<Mat> basis_;
  int size_ = 0;
  int dim_ = 0;
};

/** A normal state given by a block density matrix rho (trace one). */
class State {
 public:
  State(const Algebra& algebra, Mat density);
  /** Normalized trace. */
  static State tracial(const Algebra& algebra);
  /** Diagonal density with the given N entries (rescaled to trace one). */
  static State diagonal(const Algebra& algebra, const std::vector<double>& entries);

  const Mat& density() const { return density_; }
  cplx operator()(const Mat& x) const { return (density_ * x).trace(); }

 private:
  Mat density_;
};

/**
 * The standard form L^2(M) realized on block Hilbert-Schmidt matrices, with
 * x phi^{1/2} = x rho^{1/2} and phi^{1/2} x = rho^{1/2} x. Vectors use the
 * same coordinates as algebra elements.
 */
class StandardForm {
 public:
  /** Throws FaithfulnessError unless min eig(rho) >= 1e-10 * max eig(rho). */
  StandardForm(Algebra algebra, State state);

  const Algebra& algebra() const { return algebra_; }
  const State& state() const { return state_; }
  int dim() const { return algebra_.dim(); }

  const Mat& rho() const { return state_.density(); }
  const Mat& rho_sqrt() const { return rho_sqrt_; }
  const Mat& rho_inv_sqrt() const { return rho_inv_sqrt_; }
  /** phi^{1/2} as a vector. */
  const Vec& cyclic() const { return cyclic_; }

  /** x phi^{1/2}. */
  Vec right_embed(const Mat& x) const;
  /** phi^{1/2} x. */
  Vec left_embed(const Mat& x) const;
  /** The x with phi^{1/2} x = eta. */
  Mat materialize_left(const Vec& eta) const;
  /** The x with x phi^{1/2} = eta. */
  Mat materialize_right(const Vec& eta) const;

  /** Coordinate matrix of right multiplication by rho^{-1/2}. */
  const Mat& right_inv_sqrt_op() const { return right_inv_sqrt_op_; }
  /** Coordinate matrix of left multiplication by rho^{-1/2}. */
  const Mat& left_inv_sqrt_op() const { return left_inv_sqrt_op_; }

  /**
   * Recovers m from an operator on L^2(M) that is left multiplication by m,
   * via m = op(phi^{1/2}) rho^{-1/2}.
   */
  Mat element_from_left_operator(const Mat& op) const;

  bool is_tracial(double tol = 1e-12) const;

 private:
  Algebra algebra_;
  State state_;
  Mat rho_sqrt_;
  Mat rho_inv_sqrt_;
  Vec cyclic_;
  Mat right_inv_sqrt_op_;
  Mat left_inv_sqrt_op_;
};

/**
 * pi_phi(xi) : L^2(M) -> H, the bounded map with pi_phi(xi)(phi^{1/2} x) = xi x.
 * Returned as a dim(H) x dim(L^2) matrix.
 */
Mat pi_phi(const StandardForm& sf, const Bimodule& h, const Vec& xi);

/** L^2(M) as a bimodule over M. */
Bimodule standard_bimodule(const StandardForm& sf);

}  // namespace wstar
