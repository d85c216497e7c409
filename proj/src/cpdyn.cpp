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

#include "wstar/cpdyn.hpp"

#include <Eigen/Eigenvalues>

#include "wstar/errors.hpp"

namespace wstar {

CpMap::CpMap(Algebra algebra, Mat action) : algebra_(std::move(algebra)), action_(std::move(action)) {
  if (action_.rows() != algebra_.dim() || action_.cols() != algebra_.dim())
    throw DomainError("map matrix does not match the algebra dimension");
}

CpMap CpMap::identity(const Algebra& algebra) {
  return CpMap(algebra, Mat::Identity(algebra.dim(), algebra.dim()));
}

CpMap CpMap::from_function(const Algebra& algebra, const std::function<Mat(const Mat&)>& f) {
  return CpMap(algebra, coordinate_matrix(algebra, f));
}

Mat CpMap::operator()(const Mat& x) const {
  return algebra_.element(action_ * algebra_.coords(x));
}

CpMap CpMap::compose(const CpMap& other) const {
  if (!(algebra_ == other.algebra_)) throw DomainError("composing maps on different algebras");
  return CpMap(algebra_, action_ * other.action_);
}

Mat choi_matrix(const CpMap& f) {
  const Algebra& a = f.algebra();
  int total = 0;
  for (int b : a.blocks())
    for (int c : a.blocks()) total += b * c;
  Mat out = Mat::Zero(total, total);
  int at = 0;
  for (int sb = 0; sb < a.num_blocks(); ++sb) {
    const int n = a.blocks()[sb];
    for (int tb = 0; tb < a.num_blocks(); ++tb) {
      const int m = a.blocks()[tb];
      const int o = a.block_offset(tb);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const Mat img = f(a.basis(a.coord_index(sb, i, j)));
          out.block(at + i * m, at + j * m, m, m) = img.block(o, o, m, m);
        }
      }
      at += n * m;
    }
  }
  return out;
}

UcpReport verify_ucp(const CpMap& f, double tol) {
  UcpReport r;
  const Algebra& a = f.algebra();
  r.unital_defect = (f(a.identity()) - a.identity()).norm();
  r.choi_min_eigenvalue = min_hermitian_eigenvalue(choi_matrix(f));
  r.pass = r.unital_defect <= tol && r.choi_min_eigenvalue >= -tol;
  return r;
}

double star_homomorphism_defect(const CpMap& f) {
  const Algebra& a = f.algebra();
  double worst = (f(a.identity()) - a.identity()).norm();
  std::vector<Mat> images;
  for (const Mat& e : a.basis()) images.push_back(f(e));
  for (int i = 0; i < a.dim(); ++i) {
    worst = std::max(worst, (f(a.basis(i).adjoint()) - images[i].adjoint()).norm());
    for (int j = 0; j < a.dim(); ++j)
      worst = std::max(worst, (f(a.basis(i) * a.basis(j)) - images[i] * images[j]).norm());
  }
  return worst;
}

double map_distance(const CpMap& a, const CpMap& b) { return (a.action() - b.action()).norm(); }

Mat coordinate_matrix(const Algebra& algebra, const std::function<Mat(const Mat&)>& f) {
  Mat out(algebra.dim(), algebra.dim());
  for (int k = 0; k < algebra.dim(); ++k) out.col(k) = algebra.coords(f(algebra.basis(k)));
  return out;
}

CpSemigroup::CpSemigroup(Algebra algebra, Mat generator)
    : algebra_(std::move(algebra)), generator_(std::move(generator)), cache_(std::make_shared<Cache>()) {
  if (generator_.rows() != algebra_.dim() || generator_.cols() != algebra_.dim())
    throw DomainError("generator does not match the algebra dimension");
  const double defect = (generator_ * algebra_.coords(algebra_.identity())).norm();
  if (defect > 1e-10)
    throw NonUnitalGeneratorError("generator does not annihilate the unit (defect " +
                                  std::to_string(defect) + ")");
}

CpMap CpSemigroup::evaluate(double t) const {
  if (t < 0.0) throw DomainError("semigroup evaluated at negative time");
  if (t == 0.0) return CpMap::identity(algebra_);
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->values.find(t);
    if (it != cache_->values.end()) return CpMap(algebra_, it->second);
  }
  Mat value = expm(Mat(t * generator_));
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto [it, inserted] = cache_->values.emplace(t, std::move(value));
  return CpMap(algebra_, it->second);
}

CpSemigroup semigroup_from_generator(const Algebra& algebra, const Mat& generator) {
  return CpSemigroup(algebra, generator);
}

Mat stochastic_pair_generator() {
  Mat l(2, 2);
  l << -1.0, 1.0, 0.0, 0.0;
  return l;
}

Mat lindblad_generator(const Algebra& algebra, const std::vector<Mat>& jumps, const Mat& hamiltonian) {
  const cplx i(0.0, 1.0);
  return coordinate_matrix(algebra, [&](const Mat& x) {
    Mat out = Mat::Zero(x.rows(), x.cols());
    if (hamiltonian.size() > 0) out += i * (hamiltonian * x - x * hamiltonian);
    for (const Mat& v : jumps) {
      const Mat vv = v.adjoint() * v;
      out += v.adjoint() * x * v - 0.5 * (vv * x + x * vv);
    }
    return out;
  });
}

Mat unitary_conjugation_generator(const Algebra& algebra, const Mat& hamiltonian) {
  const cplx i(0.0, 1.0);
  return coordinate_matrix(algebra, [&](const Mat& x) { return Mat(i * (x * hamiltonian - hamiltonian * x)); });
}

double semigroup_law_defect(const CpSemigroup& semigroup, double s, double t) {
  const CpMap lhs = semigroup.evaluate(s).compose(semigroup.evaluate(t));
  return map_distance(lhs, semigroup.evaluate(s + t));
}

}  // namespace wstar
