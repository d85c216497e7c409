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

#include "wstar/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "wstar/bimodule.hpp"
#include "wstar/errors.hpp"

namespace wstar {

Algebra::Algebra(std::vector<int> block_sizes) : blocks_(std::move(block_sizes)) {
  if (blocks_.empty()) throw DomainError("an algebra needs at least one block");
  for (int n : blocks_) {
    if (n <= 0) throw DomainError("block sizes must be positive");
    block_offset_.push_back(size_);
    coord_offset_.push_back(dim_);
    size_ += n;
    dim_ += n * n;
  }
  basis_.reserve(dim_);
  for (int b = 0; b < num_blocks(); ++b) {
    for (int i = 0; i < blocks_[b]; ++i) {
      for (int j = 0; j < blocks_[b]; ++j) {
        Mat e = Mat::Zero(size_, size_);
        e(block_offset_[b] + i, block_offset_[b] + j) = 1.0;
        basis_.push_back(std::move(e));
      }
    }
  }
}

int Algebra::coord_index(int b, int i, int j) const {
  return coord_offset_[b] + i * blocks_[b] + j;
}

Mat Algebra::zero() const { return Mat::Zero(size_, size_); }

Mat Algebra::identity() const { return Mat::Identity(size_, size_); }

std::string Algebra::basis_label(int k) const {
  int b = num_blocks() - 1;
  while (coord_offset_[b] > k) --b;
  const int local = k - coord_offset_[b];
  std::ostringstream os;
  os << "E" << b << "(" << local / blocks_[b] << "," << local % blocks_[b] << ")";
  return os.str();
}

Vec Algebra::coords(const Mat& x) const {
  if (x.rows() != size_ || x.cols() != size_) throw DomainError("element has the wrong shape");
  Vec c(dim_);
  for (int b = 0; b < num_blocks(); ++b) {
    const int n = blocks_[b], o = block_offset_[b], co = coord_offset_[b];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(co + i * n + j) = x(o + i, o + j);
  }
  return c;
}

Mat Algebra::element(const Vec& c) const {
  if (c.size() != dim_) throw DomainError("coordinate vector has the wrong length");
  Mat x = Mat::Zero(size_, size_);
  for (int b = 0; b < num_blocks(); ++b) {
    const int n = blocks_[b], o = block_offset_[b], co = coord_offset_[b];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(o + i, o + j) = c(co + i * n + j);
  }
  return x;
}

double Algebra::off_block_defect(const Mat& x) const {
  double worst = 0.0;
  std::vector<int> block_of(size_);
  for (int b = 0; b < num_blocks(); ++b)
    for (int i = 0; i < blocks_[b]; ++i) block_of[block_offset_[b] + i] = b;
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j)
      if (block_of[i] != block_of[j]) worst = std::max(worst, std::abs(x(i, j)));
  return worst;
}

Mat Algebra::left_mult(const Mat& x) const {
  Mat out(dim_, dim_);
  for (int k = 0; k < dim_; ++k) out.col(k) = coords(x * basis_[k]);
  return out;
}

Mat Algebra::right_mult(const Mat& y) const {
  Mat out(dim_, dim_);
  for (int k = 0; k < dim_; ++k) out.col(k) = coords(basis_[k] * y);
  return out;
}

Mat Algebra::random_element(Rng& rng) const {
  return element(random_matrix(rng, dim_, 1).col(0));
}

State::State(const Algebra& algebra, Mat density) : density_(std::move(density)) {
  if (!algebra.is_element(density_)) throw DomainError("density is not an element of the algebra");
  if ((density_ - density_.adjoint()).norm() > 1e-12) throw DomainError("density is not Hermitian");
  if (std::abs(density_.trace() - cplx(1.0)) > 1e-10) throw DomainError("density must have trace one");
  if (min_hermitian_eigenvalue(density_) < -1e-12) throw DomainError("density is not positive");
  density_ = 0.5 * (density_ + density_.adjoint());
}

State State::tracial(const Algebra& algebra) {
  return State(algebra, algebra.identity() / static_cast<double>(algebra.size()));
}

State State::diagonal(const Algebra& algebra, const std::vector<double>& entries) {
  if (static_cast<int>(entries.size()) != algebra.size())
    throw DomainError("diagonal state needs one weight per matrix row");
  double total = 0.0;
  for (double e : entries) total += e;
  if (total <= 0.0) throw DomainError("diagonal state weights must have positive sum");
  Mat d = Mat::Zero(algebra.size(), algebra.size());
  for (int i = 0; i < algebra.size(); ++i) d(i, i) = entries[i] / total;
  return State(algebra, d);
}

StandardForm::StandardForm(Algebra algebra, State state)
    : algebra_(std::move(algebra)), state_(std::move(state)) {
  const Mat& rho = state_.density();
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < 1e-10 * hi) throw FaithfulnessError("state is not faithful (min eigenvalue " +
                                               std::to_string(lo) + ")");
  rho_sqrt_ = psd_sqrt(rho);
  rho_inv_sqrt_ = psd_inverse_sqrt(rho);
  cyclic_ = algebra_.coords(rho_sqrt_);
  right_inv_sqrt_op_ = algebra_.right_mult(rho_inv_sqrt_);
  left_inv_sqrt_op_ = algebra_.left_mult(rho_inv_sqrt_);
}

Vec StandardForm::right_embed(const Mat& x) const { return algebra_.coords(x * rho_sqrt_); }

Vec StandardForm::left_embed(const Mat& x) const { return algebra_.coords(rho_sqrt_ * x); }

Mat StandardForm::materialize_left(const Vec& eta) const {
  const Mat x = rho_inv_sqrt_ * algebra_.element(eta);
  if ((left_embed(x) - eta).norm() > 1e-10 * std::max(1.0, eta.norm()))
    throw ConsistencyError("vector is not in the range of x -> phi^{1/2} x");
  return x;
}

Mat StandardForm::materialize_right(const Vec& eta) const {
  const Mat x = algebra_.element(eta) * rho_inv_sqrt_;
  if ((right_embed(x) - eta).norm() > 1e-10 * std::max(1.0, eta.norm()))
    throw ConsistencyError("vector is not in the range of x -> x phi^{1/2}");
  return x;
}

Mat StandardForm::element_from_left_operator(const Mat& op) const {
  return algebra_.element(right_inv_sqrt_op_ * (op * cyclic_));
}

bool StandardForm::is_tracial(double tol) const {
  const Mat& rho = state_.density();
  for (const Mat& e : algebra_.basis())
    if ((rho * e - e * rho).norm() > tol) return false;
  return true;
}

Mat pi_phi(const StandardForm& sf, const Bimodule& h, const Vec& xi) {
  const int d = sf.dim();
  if (xi.size() != h.dim()) throw DomainError("vector does not belong to the bimodule");
  Mat out(h.dim(), d);
  for (int j = 0; j < d; ++j) {
    // basis vector f_j = phi^{1/2} (rho^{-1/2} f_j)
    const Vec y = sf.left_inv_sqrt_op().col(j);
    out.col(j) = h.right_action(y) * xi;
  }
  return out;
}

Bimodule standard_bimodule(const StandardForm& sf) {
  const Algebra& a = sf.algebra();
  Bimodule b;
  b.provenance = Provenance::StandardForm;
  b.dimension = a.dim();
  for (int k = 0; k < a.dim(); ++k) {
    b.left.push_back(a.left_mult(a.basis(k)));
    b.right.push_back(a.right_mult(a.basis(k)));
  }
  b.generators = Mat::Identity(a.dim(), a.dim());
  for (int k = 0; k < a.dim(); ++k) b.generator_labels.push_back(a.basis_label(k));
  return b;
}

}  // namespace wstar
