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
#include <vector>

#include "wstar/algebra.hpp"
#include "wstar/rational.hpp"

namespace wstar {

/** A linear map on an algebra, stored as a matrix on element coordinates. */
class CpMap {
 public:
  CpMap(Algebra algebra, Mat action);
  static CpMap identity(const Algebra& algebra);
  static CpMap from_function(const Algebra& algebra, const std::function<Mat(const Mat&)>& f);

  const Algebra& algebra() const { return algebra_; }
  const Mat& action() const { return action_; }

  Mat operator()(const Mat& x) const;
  /** (*this) o other */
  CpMap compose(const CpMap& other) const;

 private:
  Algebra algebra_;
  Mat action_;
};

/** sum_ij E_ij (x) F(E_ij), one block for each (source block, target block) pair. */
Mat choi_matrix(const CpMap& f);

struct UcpReport {
  double unital_defect = 0.0;
  double choi_min_eigenvalue = 0.0;
  bool pass = false;
};

UcpReport verify_ucp(const CpMap& f, double tol = 1e-10);

/** Max defect of multiplicativity, adjoint compatibility and unitality on basis elements. */
double star_homomorphism_defect(const CpMap& f);

/** Frobenius distance between the coordinate matrices. */
double map_distance(const CpMap& a, const CpMap& b);

/** T_t = exp(tL) for a generator L acting on element coordinates. */
class CpSemigroup {
 public:
  /** Throws NonUnitalGeneratorError unless L(1) = 0 within 1e-10. */
  CpSemigroup(Algebra algebra, Mat generator);

  const Algebra& algebra() const { return algebra_; }
  const Mat& generator() const { return generator_; }

  /** Throws DomainError for t < 0; evaluate(0) is exactly the identity. */
  CpMap evaluate(double t) const;
  CpMap evaluate(const Rational& t) const { return evaluate(to_double(t)); }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<double, Mat> values;
  };
  Algebra algebra_;
  Mat generator_;
  std::shared_ptr<Cache> cache_;
};

CpSemigroup semigroup_from_generator(const Algebra& algebra, const Mat& generator);

/** Coordinate matrix of a linear map on the algebra. */
Mat coordinate_matrix(const Algebra& algebra, const std::function<Mat(const Mat&)>& f);

/** L(a+b) = (b-a)+0 on C+C. */
Mat stochastic_pair_generator();
/** L(x) = i[H, x] + sum_k (V_k* x V_k - (V_k* V_k x + x V_k* V_k)/2). */
Mat lindblad_generator(const Algebra& algebra, const std::vector<Mat>& jumps,
                       const Mat& hamiltonian = Mat());
/** Generator of x -> v_t* x v_t with v_t = exp(itH), i.e. L(x) = i[x, H]. */
Mat unitary_conjugation_generator(const Algebra& algebra, const Mat& hamiltonian);

/** Max over basis pairs of the semigroup law defect at (s, t). */
double semigroup_law_defect(const CpSemigroup& semigroup, double s, double t);

}  // namespace wstar
