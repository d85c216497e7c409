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

#include <catch2/catch_amalgamated.hpp>

#include <memory>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wstar/dilation.hpp"

using namespace wstar;

namespace {

std::shared_ptr<CellSystem> pair_cells() {
  return std::make_shared<CellSystem>(fixture::stochastic_pair_form(), family_of(fixture::stochastic_pair()));
}

std::shared_ptr<CellSystem> lindblad_cells() {
  return std::make_shared<CellSystem>(fixture::skewed_m2(), family_of(fixture::lindblad_m2()));
}

GridUnit contractive_unit(const TruncatedLimit& tl, Rng& rng, double scale) {
  const Vec eta = tl.unit_vector(1) + 0.3 * random_matrix(rng, tl.dim(1), 1).col(0);
  GridUnit u = grid_unit_from_generator(tl, eta);
  const double norm = grid_unit_norm(tl, u);
  return scale_grid_unit(u, cplx(scale / std::sqrt(std::max(norm, 1.0)), 0.0));
}

}  // namespace

TEST_CASE("the dilation compresses to the semigroup", "[dilation]") {
  const auto cells = pair_cells();
  const CpSemigroup sg = fixture::stochastic_pair();
  const TruncatedLimit tl(cells, Rational(1, 4), 4);
  CHECK(tl.composition_defect() < 1e-12);
  CHECK(tl.embedding_defect() < 1e-12);
  for (int k = 0; k <= 4; ++k) {
    CHECK(tl.dim(k) == (k == 0 ? 2 : k + 2));
    const CpMap tk = sg.evaluate(Rational(k, 4));
    for (int e = 0; e < cells->algebra().dim(); ++e) {
      CHECK(compression_defect(tl, tk, k, cells->algebra().basis(e)) < 1e-12);
      CHECK(corner_defect(tl, tk, k, cells->algebra().basis(e)) < 1e-12);
    }
  }
}

TEST_CASE("theta is a unital endomorphism semigroup", "[dilation]") {
  const auto cells = lindblad_cells();
  const Algebra& a = cells->algebra();
  const TruncatedLimit tl(cells, Rational(1, 8), 2);
  Rng rng(61);
  const TruncOp x = tl.represent(a.random_element(rng));
  const TruncOp y = tl.represent(a.random_element(rng));
  const Mat one = Mat::Identity(tl.top_dim(), tl.top_dim());
  CHECK((tl.dilate(1, x * y).op - (tl.dilate(1, x) * tl.dilate(1, y)).op).norm() < 1e-12);
  CHECK((tl.dilate(1, adjoint(x)).op - tl.dilate(1, x).op.adjoint()).norm() < 1e-12);
  CHECK((tl.dilate(1, tl.dilate(1, x)).op - tl.dilate(2, x).op).norm() < 1e-12);
  CHECK((tl.dilate(2, tl.identity()).op - one).norm() < 1e-12);
  const CpSemigroup sg = fixture::lindblad_m2();
  for (int e = 0; e < a.dim(); ++e) CHECK(compression_defect(tl, sg.evaluate(0.25), 2, a.basis(e)) < 1e-10);
}

TEST_CASE("orbits of the corner span the top level", "[dilation]") {
  const auto cells = pair_cells();
  const TruncatedLimit tl(cells, Rational(1, 4), 3);
  const MinimalityReport r = minimality_evidence(tl);
  CHECK(r.full);
  CHECK(r.span_rank == tl.top_dim());
  const Algebra& a = cells->algebra();
  Rng rng(62);
  const std::vector<Mat> xs{a.random_element(rng), a.random_element(rng)};
  CHECK(orbit_formula_defect(tl, xs, a.random_element(rng)) < 1e-12);
}

TEST_CASE("dilations beyond the horizon name the admissible time", "[dilation]") {
  const auto cells = pair_cells();
  const TruncatedLimit tl(cells, Rational(1, 2), 2);
  const TruncOp x = tl.represent(cells->algebra().basis(0));
  try {
    tl.dilate(3, x);
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(std::string(e.what()).find("max admissible t = 1") != std::string::npos);
  }
  CHECK_THROWS_AS(tl.grid_index(Rational(1, 3)), TruncationError);
  CHECK_THROWS_AS(tl.grid_index(Rational(3)), TruncationError);
  CHECK(tl.grid_index(Rational(1)) == 2);
}

TEST_CASE("units and cocycles correspond", "[dilation][property]") {
  const auto cells = lindblad_cells();
  const TruncatedLimit tl(cells, Rational(1, 8), 2);
  Rng rng(63);
  for (int s = 0; s < 3; ++s) {
    const GridUnit u = contractive_unit(tl, rng, 0.9);
    CHECK(grid_unit_factorization_defect(tl, u) < 1e-10);
    CHECK(grid_unit_norm(tl, u) <= 1.0 + 1e-12);
    const Cocycle w = cocycle_from_unit(tl, u);
    CHECK(cocycle_law_defect(tl, w) < 1e-10);
    CHECK(adaptedness_defect(tl, w) < 1e-10);
    CHECK(unit_distance(unit_from_cocycle(tl, w), u) < 1e-10);
    CHECK(cocycle_distance(cocycle_from_unit(tl, unit_from_cocycle(tl, w)), w) < 1e-10);
  }
  const Cocycle canonical = cocycle_from_unit(tl, canonical_grid_unit(tl));
  CHECK(corner_isometry_defect(tl, canonical) < 1e-10);
}

TEST_CASE("continuity profile shrinks with the grid step", "[dilation]") {
  std::vector<std::vector<double>> at_delta;
  for (int den : {4, 8, 16}) {
    const TruncatedLimit tl(pair_cells(), Rational(1, den), 1);
    std::vector<double> row(2, 0.0);
    for (const auto& c : continuity_profile(tl))
      if (c.k == 1) row[c.basis] = c.value;
    at_delta.push_back(row);
  }
  for (int e = 0; e < 2; ++e) {
    CHECK(at_delta[1][e] < at_delta[0][e]);
    CHECK(at_delta[2][e] < at_delta[1][e]);
  }
}

TEST_CASE("sub-sampled orbits report a partial span", "[dilation]") {
  const TruncatedLimit tl(pair_cells(), Rational(1, 4), 3);
  const MinimalityReport r = minimality_evidence(tl, {0});
  CHECK_FALSE(r.full);
  CHECK(r.span_rank < tl.top_dim());
  CHECK(r.dim == tl.top_dim());
}

TEST_CASE("the representation is multiplicative", "[dilation][property]") {
  const auto cells = lindblad_cells();
  const TruncatedLimit tl(cells, Rational(1, 8), 2);
  Rng rng(64);
  for (int s = 0; s < 10; ++s) {
    const Mat x = cells->algebra().random_element(rng), y = cells->algebra().random_element(rng);
    CHECK(op_norm((tl.represent(x) * tl.represent(y)).op - tl.represent(x * y).op) < 1e-10);
  }
}
