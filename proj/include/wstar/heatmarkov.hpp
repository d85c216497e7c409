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

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wstar/dilation.hpp"

namespace wstar {

using RealMat = Eigen::MatrixXd;

/** A reversible Markov generator on m states: weights mu and a mu-symmetric Laplacian. */
class MarkovModel {
 public:
  /** Normalizes mu; throws DomainError unless mu > 0, Delta 1 = 0, off-diagonals <= 0 and mu-symmetry hold. */
  MarkovModel(RealVec mu, RealMat laplacian);

  /** Graph Laplacian with uniform weights: "cycle(m)", "path(m)" or "complete(m)". */
  static MarkovModel named(const std::string& spec);
  static MarkovModel cycle(int m);
  static MarkovModel path(int m);
  static MarkovModel complete(int m);

  int states() const { return static_cast<int>(mu_.size()); }
  const RealVec& mu() const { return mu_; }
  const RealMat& laplacian() const { return laplacian_; }

  /** e^{-t Delta} as a stochastic matrix. */
  RealMat transition(double t) const;
  /** p_t(x, y) = e^{-t Delta}(x, y) / mu(y); throws DomainError for t <= 0. */
  RealMat kernel(double t) const;

  Algebra algebra() const;
  StandardForm standard_form() const;
  /** T_t = e^{-t Delta} acting on the diagonal algebra. */
  CpSemigroup semigroup() const;

 private:
  RealVec mu_;
  RealMat laplacian_;
  RealVec spectrum_;
  RealMat eigvecs_;
};

struct KernelReport {
  double symmetry_defect = 0.0;
  double mass_defect = 0.0;
  double min_entry = 0.0;
  double chapman_kolmogorov_defect = 0.0;
};

/** Symmetry, mass and non-negativity at each t, Chapman-Kolmogorov over all pairs (s, t). */
KernelReport kernel_report(const MarkovModel& model, const std::vector<double>& times);
/** max_{x,z} | p_{s+t}(x,z) - sum_y p_s(x,y) p_t(y,z) mu(y) |. */
double chapman_kolmogorov_defect(const MarkovModel& model, double s, double t);

/** A function of n+1 state variables stored row-major, first variable most significant. */
struct PathFunction {
  int states = 0;
  int arity = 0;
  std::vector<cplx> values;

  static PathFunction constant(int states, int arity, cplx c);
  static PathFunction from_state_function(const Vec& f);
  cplx operator()(const std::vector<int>& xs) const;
};

/** Flat index of a state tuple; first variable most significant. */
std::size_t tuple_index(int states, const std::vector<int>& xs);
std::vector<int> tuple_of(int states, int arity, std::size_t index);

/**
 * (f box g)(x_1, ..., x_a, y_2, ..., y_b) = f(x_1, ..., x_a) g(x_a, y_2, ..., y_b). One-variable
 * arguments give the two degenerate cases. Throws DomainError on mismatched state counts.
 */
PathFunction box(const PathFunction& f, const PathFunction& g);

struct PathMeasure {
  Partition partition;
  int states = 0;
  std::vector<double> weights;
  double mass() const;
};

/** mu_p(x_1..x_{n+1}) = p_{t_1}(x_1,x_2) ... p_{t_n}(x_n,x_{n+1}) mu(x_1) ... mu(x_{n+1}). */
PathMeasure path_measure(const MarkovModel& model, const Partition& p);
/** Max over interior coordinates of the distance between the marginal and the coarsened measure. */
double marginal_defect(const MarkovModel& model, const Partition& p);

/**
 * The cells L^2(M_p, mu_p) in orthonormal coordinates c = f sqrt(mu_p); the
 * left action multiplies by g(x_1), the right action by g(x_{n+1}), products
 * are f box g and refinements duplicate variables.
 */
class HeatPathSystem : public ProductSystem {
 public:
  explicit HeatPathSystem(MarkovModel model);
  const MarkovModel& model() const { return model_; }

  const std::vector<double>& measure(const Partition& p) const;
  Vec to_coords(const Partition& p, const PathFunction& f) const;
  PathFunction from_coords(const Partition& p, const Vec& c) const;

 protected:
  BimodulePtr build_fiber(const Partition& p) const override;
  Mat build_product(const Partition& q, const Partition& p) const override;
  Mat build_refine(const Partition& fine, const Partition& coarse) const override;
  Vec build_unit(const Partition& p) const override;

 private:
  MarkovModel model_;
  mutable std::map<Partition, std::vector<double>> measures_;
};

struct CellComparison {
  Partition partition;
  int cell_dim = 0;
  int path_dim = 0;
  double gram_defect = 0.0;
  MapReport iso;
};

/**
 * Compares the cells of the heat semigroup with L^2(M_p, mu_p) through the
 * words (f_1 (x) g_1 phi^{1/2}) ... (f_n (x) g_n phi^{1/2}) ->
 * f_1(x_1) g_1(x_2) f_2(x_2) ... f_n(x_n) g_n(x_{n+1}).
 */
CellComparison compare_heat_cells(const CellSystem& cells, const HeatPathSystem& paths, const Partition& p);

/** The unitary from the cells onto L^2(M_p, mu_p) determined by the same words. */
Mat cell_to_path_map(const CellSystem& cells, const HeatPathSystem& paths, const Partition& p);

/** || u_fine a_{fine,coarse} - a'_{fine,coarse} u_coarse || between the two models. */
double refinement_compatibility(const CellSystem& cells, const HeatPathSystem& paths, const Partition& fine,
                                const Partition& coarse);

/** y -> sum_x f(x_1..x_n, y) p_{t_n}(x_n, y) mu_{p'}(x_1..x_n) with p' = (t_1..t_{n-1}). */
PathFunction b_adjoint_formula(const MarkovModel& model, const Partition& p, const PathFunction& f);
/** The embedding L^2(M) -> L^2(M_p, mu_p), h -> h(x_{n+1}), as a matrix on coordinates. */
Mat b_embedding(const ProductSystem& system, const Partition& p);
/** Max over the given functions of the distance between b* f computed by matrix adjoint and by formula. */
double b_adjoint_defect(const HeatPathSystem& paths, const Partition& p, const std::vector<PathFunction>& fs);

struct PathDilationEntry {
  int k = 0;
  int basis = 0;
  /** || kappa_0* theta_k(f) kappa_0 - mult(T_t f) ||. */
  double operator_defect = 0.0;
  /** Max over g of || b*(f(x_1) g(x_{k+1})) - (T_t f) g || with b* from the explicit formula. */
  double formula_defect = 0.0;
  /** Max over g of || theta_k(f) kappa_0 g - kappa_k(f(x_1) g(x_{k+1})) ||. */
  double orbit_defect = 0.0;
};

/** kappa_0* theta_{k delta}(f) kappa_0 = mult(T_{k delta} f) for k = 1..n and indicator functions f. */
std::vector<PathDilationEntry> check_path_dilation(std::shared_ptr<const HeatPathSystem> paths, const Rational& delta,
                                                   int levels);

}  // namespace wstar
