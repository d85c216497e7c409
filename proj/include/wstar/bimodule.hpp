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

#include <memory>
#include <string>
#include <vector>

#include "wstar/algebra.hpp"
#include "wstar/cpdyn.hpp"

namespace wstar {

enum class Provenance { StandardForm, GnsTensor, RelativeTensor, Twisted, L2Path };

std::string to_string(Provenance p);

/**
 * A finite-dimensional Hilbert space with commuting left and right actions
 * of an algebra, in orthonormal coordinates. `left[k]` and `right[k]` are
 * the actions of the k-th matrix unit.
 */
class Bimodule {
 public:
  int dim() const { return dimension; }
  Mat left_action(const Vec& coords) const;
  Mat right_action(const Vec& coords) const;

  int dimension = 0;
  std::vector<Mat> left;
  std::vector<Mat> right;
  /** Designated spanning vectors (columns) with their labels. */
  Mat generators;
  std::vector<std::string> generator_labels;
  Provenance provenance = Provenance::StandardForm;
};

using BimodulePtr = std::shared_ptr<const Bimodule>;

struct BimoduleDefects {
  double left_multiplicative = 0.0;
  double left_adjoint = 0.0;
  double left_unital = 0.0;
  double right_multiplicative = 0.0;
  double right_adjoint = 0.0;
  double right_unital = 0.0;
  double commutation = 0.0;
  double max() const;
};

BimoduleDefects check_bimodule(const Algebra& algebra, const Bimodule& b);

/** M (x)_T L^2(M) together with its quotient map from formal tensors E_i (x) f_j. */
struct GnsTensor {
  BimodulePtr space;
  /** dim x D^2, column i*D+j is the image of E_i (x) f_j. */
  Mat quotient;
  Mat lift;
  /** Image of x (x) eta (eta given in L^2 coordinates). */
  Vec vector(const Algebra& algebra, const Mat& x, const Vec& eta) const;
};

/**
 * Built from a Kraus decomposition of t (weights below 1e-12 of the largest are
 * dropped). Throws NonCpError when the Choi matrix is indefinite beyond -1e-8 * max.
 */
GnsTensor gns_tensor(const StandardForm& sf, const CpMap& t);

/** H (x)^M K, with fuse(xi, eta) = xi phi^{-1/2} eta. */
struct RelativeTensor {
  BimodulePtr left_factor;
  BimodulePtr right_factor;
  BimodulePtr space;
  Mat quotient;
  Mat lift;
  Vec fuse(const Vec& xi, const Vec& eta) const { return quotient * kron(xi, eta); }
};

/** Throws ConsistencyError when the Gram matrix is indefinite beyond -1e-8 * max. */
RelativeTensor relative_tensor(const StandardForm& sf, BimodulePtr h, BimodulePtr k);

/**
 * The map a (x) b from source = H (x)^M K to target = H' (x)^M K'. The caller
 * is responsible for a being right linear and b left linear.
 */
Mat tensor_maps(const RelativeTensor& source, const RelativeTensor& target, const Mat& a, const Mat& b);

/** The element m with pi_phi(xi1)* pi_phi(xi2) = left multiplication by m. */
Mat inner_element(const StandardForm& sf, const Bimodule& h, const Vec& xi1, const Vec& xi2);

/**
 * Distance between pi_phi(x1 (x) y1 phi^{1/2})* pi_phi(x2 (x) y2 phi^{1/2})
 * computed inside gns_tensor(t) and left multiplication by y1* t(x1* x2) y2.
 */
double check_prop_formula(const StandardForm& sf, const CpMap& t, const Mat& x1, const Mat& y1,
                          const Mat& x2, const Mat& y2);

struct BimoduleMap {
  BimodulePtr source;
  BimodulePtr target;
  Mat matrix;
};

struct MapFlags {
  bool bilinear = false;
  bool isometric = false;
  bool unitary = false;
};

struct MapReport {
  double bilinear_defect = 0.0;
  double isometric_defect = 0.0;
  double unitary_defect = 0.0;
  bool pass = true;
};

MapReport verify_map(const BimoduleMap& f, MapFlags flags, double tol = 1e-10);

/**
 * Linear map determined by images of a spanning family: returns A with
 * A * source = target, throwing ConsistencyError if the family relations are
 * not respected within `tol` (relative to the largest column norm).
 */
Mat map_from_family(const Mat& source, const Mat& target, double tol = 1e-9);

}  // namespace wstar
