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
#include "wstar/errors.hpp"
#include "wstar/prodsys.hpp"

using namespace wstar;

namespace {

std::shared_ptr<CellSystem> lindblad_cells() {
  return std::make_shared<CellSystem>(fixture::skewed_m2(), family_of(fixture::lindblad_m2()));
}

std::shared_ptr<CellSystem> pair_cells() {
  return std::make_shared<CellSystem>(fixture::stochastic_pair_form(), family_of(fixture::stochastic_pair()));
}

Vec random_unit_vector(Rng& rng, int dim) { return random_matrix(rng, dim, 1).col(0).normalized(); }

}  // namespace

TEST_CASE("cell inner products agree with the word recursion", "[prodsys]") {
  const auto cells = lindblad_cells();
  const Algebra& a = cells->algebra();
  const Partition p = Partition::parse("1/4,1/8");
  std::vector<Mat> maps;
  for (const auto& t : p.parts()) maps.push_back(cells->map_at(t).action());
  Rng rng(51);
  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    std::vector<Mat> xs, ys, xs2, ys2;
    for (std::size_t i = 0; i < p.size(); ++i) {
      xs.push_back(a.random_element(rng));
      ys.push_back(a.random_element(rng));
      xs2.push_back(a.random_element(rng));
      ys2.push_back(a.random_element(rng));
    }
    const cplx got = cells->word(p, xs, ys).dot(cells->word(p, xs2, ys2));
    const cplx want = oracle::word_inner(a, cells->standard_form().rho(), maps, xs, ys, xs2, ys2);
    worst = std::max(worst, std::abs(got - want));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("stochastic pair cells have dimension #p + 2", "[prodsys]") {
  const auto cells = pair_cells();
  for (const char* text : {"1", "1/2,1/2", "1/4,1/4,1/2", "1/8,1/8,1/4,1/2", "1/4,1/4,1/4,1/4,1/4"}) {
    const Partition p = Partition::parse(text);
    CHECK(cells->fiber(p)->dim() == static_cast<int>(p.size()) + 2);
    CHECK(check_bimodule(cells->algebra(), *cells->fiber(p)).max() < 1e-12);
  }
}

TEST_CASE("cell products are associative bimodule unitaries", "[prodsys]") {
  const auto cells = lindblad_cells();
  const Partition a = Partition::parse("1/4"), b = Partition::parse("1/8"), c = Partition::parse("1/8");
  const MapReport r = verify_map(multiply_cells(*cells, a, join(b, c)), MapFlags{true, false, true});
  CHECK(r.pass);
  CHECK(r.unitary_defect < 1e-10);
  const auto ab = cells->fusion(a, b), bc = cells->fusion(b, c);
  const auto ab_c = cells->fusion(join(a, b), c), a_bc = cells->fusion(a, join(b, c));
  Rng rng(52);
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    const Vec xi = random_unit_vector(rng, cells->fiber(a)->dim());
    const Vec eta = random_unit_vector(rng, cells->fiber(b)->dim());
    const Vec zeta = random_unit_vector(rng, cells->fiber(c)->dim());
    const Vec left = cells->product(join(a, b), c) * ab_c->fuse(cells->product(a, b) * ab->fuse(xi, eta), zeta);
    const Vec right = cells->product(a, join(b, c)) * a_bc->fuse(xi, cells->product(b, c) * bc->fuse(eta, zeta));
    worst = std::max(worst, (left - right).norm());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("products multiply words", "[prodsys]") {
  const auto cells = pair_cells();
  const Algebra& alg = cells->algebra();
  const Partition q = Partition::parse("1/2"), p = Partition::parse("1/4,1/4");
  Rng rng(53);
  std::vector<Mat> xs, ys;
  for (int i = 0; i < 3; ++i) {
    xs.push_back(alg.random_element(rng));
    ys.push_back(alg.random_element(rng));
  }
  const Vec wq = cells->word(q, {xs[0]}, {ys[0]});
  const Vec wp = cells->word(p, {xs[1], xs[2]}, {ys[1], ys[2]});
  const Vec fused = cells->product(q, p) * cells->fusion(q, p)->fuse(wq, wp);
  CHECK((fused - cells->word(join(q, p), xs, ys)).norm() < 1e-12);
}

TEST_CASE("refinement maps are isometric and transitive", "[prodsys][property]") {
  const auto cells = pair_cells();
  const Partition coarse = Partition::parse("1");
  const Partition mid = Partition::parse("1/2,1/2");
  const Partition fine = Partition::parse("1/4,1/4,1/4,1/4");
  for (const auto& [f, c] : std::vector<std::pair<Partition, Partition>>{{mid, coarse}, {fine, mid}, {fine, coarse}}) {
    const MapReport r = verify_map(refinement_isometry(*cells, f, c), MapFlags{true, true, false});
    CHECK(r.pass);
    CHECK((cells->refine(f, c) * cells->unit(c) - cells->unit(f)).norm() < 1e-12);
  }
  CHECK((cells->refine(fine, mid) * cells->refine(mid, coarse) - cells->refine(fine, coarse)).norm() < 1e-12);
  CHECK_THROWS_AS(cells->refine(coarse, fine), OrderError);
}

TEST_CASE("the canonical unit is unital and factorizes", "[prodsys]") {
  const auto cells = lindblad_cells();
  const std::vector<Rational> times{Rational(0), Rational(1, 8), Rational(1, 4), Rational(3, 8)};
  const Unit unit = canonical_unit(*cells, times);
  CHECK(unit_unital_defect(*cells, unit) < 1e-12);
  CHECK(unit_factorization_defect(*cells, unit) < 1e-10);
  CHECK(std::abs(unit_contractive_norm(*cells, unit) - 1.0) < 1e-12);
  const Unit scaled = scale_unit(unit, 0.5);
  CHECK(unit_factorization_defect(*cells, scaled) < 1e-10);
  CHECK(unit_contractive_norm(*cells, scaled) < 1.0 + 1e-12);
}

TEST_CASE("the canonical unit recovers the semigroup and generates", "[prodsys]") {
  const auto cells = pair_cells();
  const CpSemigroup sg = fixture::stochastic_pair();
  const std::vector<Rational> times{Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)};
  const Unit unit = canonical_unit(*cells, times);
  const auto recovered = cp_from_unit(*cells, unit);
  for (const auto& t : times) CHECK(map_distance(recovered.at(t), sg.evaluate(t)) < 1e-12);
  CHECK(family_semigroup_defect(recovered) < 1e-12);
  const std::vector<Partition> parts{Partition::parse("1"), Partition::parse("1/4,3/4"), Partition::parse("1/4,1/4,1/2")};
  const GeneratingReport gen = generating_test(*cells, unit, parts);
  CHECK(gen.full);
  for (const auto& l : gen.levels) CHECK(l.rank == l.dim);
}

TEST_CASE("cells rebuilt from a unit are isomorphic to the originals", "[prodsys]") {
  const auto cells = lindblad_cells();
  const std::vector<Rational> times{Rational(0), Rational(1, 8), Rational(1, 4), Rational(1, 2)};
  const Unit unit = canonical_unit(*cells, times);
  const CellSystem rebuilt(cells->standard_form(), family_from_unit(cells, unit));
  for (const char* text : {"1/2", "1/4,1/4", "1/4,1/8,1/8"}) {
    const Partition p = Partition::parse(text);
    const RoundtripIso iso = roundtrip_iso(rebuilt, *cells, unit, p);
    CHECK(iso.report.pass);
    CHECK(iso.report.unitary_defect < 1e-10);
  }
  CHECK(roundtrip_compatibility_defect(rebuilt, *cells, unit, Partition::parse("1/4"), Partition::parse("1/4")) < 1e-10);
}

TEST_CASE("rebuilt stochastic pair cells are compatible at level three", "[prodsys]") {
  const auto cells = pair_cells();
  const std::vector<Rational> times{Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  const Unit unit = canonical_unit(*cells, times);
  const CellSystem rebuilt(cells->standard_form(), family_from_unit(cells, unit));
  const Partition q = Partition::parse("1/4"), p = Partition::parse("1/4,1/4");
  CHECK(roundtrip_compatibility_defect(rebuilt, *cells, unit, q, p) < 1e-10);
  CHECK(roundtrip_iso(rebuilt, *cells, unit, join(q, p)).report.pass);
}
