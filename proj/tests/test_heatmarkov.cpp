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

#include "oracles.hpp"
#include "wstar/errors.hpp"
#include "wstar/heatmarkov.hpp"

using namespace wstar;

namespace {

PathFunction random_path_function(Rng& rng, int states, int arity) {
  PathFunction f = PathFunction::constant(states, arity, 0.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : f.values) v = cplx(g(rng), g(rng));
  return f;
}

}  // namespace

TEST_CASE("two-state kernel matches its closed form", "[heat]") {
  const MarkovModel m = MarkovModel::complete(2);
  for (double t : {0.1, 0.5, 1.0, 3.0}) {
    const RealMat k = m.kernel(t);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) CHECK(std::abs(k(x, y) - oracle::two_state_kernel(t, x, y)) < 1e-14);
  }
}

TEST_CASE("cycle transitions match the Fourier series", "[heat]") {
  const MarkovModel m = MarkovModel::named("cycle(5)");
  REQUIRE(m.states() == 5);
  for (double t : {0.25, 1.0, 2.5}) {
    const RealMat p = m.transition(t);
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y) CHECK(std::abs(p(x, y) - oracle::cycle_transition(5, t, x, y)) < 1e-14);
  }
}

TEST_CASE("heat kernels are symmetric Markov kernels", "[heat][property]") {
  for (const char* spec : {"complete(2)", "cycle(5)", "path(4)", "complete(4)"}) {
    const MarkovModel m = MarkovModel::named(spec);
    const KernelReport r = kernel_report(m, {0.25, 0.5, 1.0, 2.0});
    CHECK(r.symmetry_defect < 1e-12);
    CHECK(r.mass_defect < 1e-12);
    CHECK(r.min_entry >= 0.0);
    CHECK(r.chapman_kolmogorov_defect < 1e-12);
  }
  CHECK_THROWS_AS(MarkovModel::complete(2).kernel(0.0), DomainError);
}

TEST_CASE("non-uniform reversible chains", "[heat]") {
  RealVec mu(3);
  mu << 1.0, 2.0, 1.0;
  RealMat lap(3, 3);
  lap << 2.0, -2.0, 0.0, -1.0, 2.0, -1.0, 0.0, -2.0, 2.0;
  const MarkovModel m(mu, lap);
  CHECK(std::abs(m.mu().sum() - 1.0) < 1e-15);
  const KernelReport r = kernel_report(m, {0.3, 0.7});
  CHECK(r.symmetry_defect < 1e-12);
  CHECK(r.chapman_kolmogorov_defect < 1e-12);
}

TEST_CASE("invalid chains are rejected", "[heat]") {
  RealVec mu(2);
  mu << 0.5, 0.5;
  RealMat bad_rows(2, 2);
  bad_rows << 1.0, -0.5, -1.0, 1.0;
  CHECK_THROWS_AS(MarkovModel(mu, bad_rows), DomainError);
  RealMat positive(2, 2);
  positive << -1.0, 1.0, 1.0, -1.0;
  CHECK_THROWS_AS(MarkovModel(mu, positive), DomainError);
  RealVec skew(2);
  skew << 0.25, 0.75;
  RealMat sym(2, 2);
  sym << 1.0, -1.0, -1.0, 1.0;
  CHECK_THROWS_AS(MarkovModel(skew, sym), DomainError);
  CHECK_THROWS(MarkovModel::named("torus(3)"));
  CHECK_THROWS(MarkovModel::named("cycle(x)"));
}

TEST_CASE("box products concatenate paths", "[heat]") {
  Rng rng(81);
  const PathFunction f = random_path_function(rng, 3, 2);
  const PathFunction g = random_path_function(rng, 3, 3);
  const PathFunction h = box(f, g);
  REQUIRE(h.arity == 4);
  CHECK(h({2, 1, 0, 2}) == f({2, 1}) * g({1, 0, 2}));
  CHECK(tuple_of(3, 4, tuple_index(3, {2, 1, 0, 2})) == std::vector<int>{2, 1, 0, 2});
  CHECK_THROWS_AS(box(f, random_path_function(rng, 2, 2)), DomainError);
}

TEST_CASE("path measures have unit mass and consistent marginals", "[heat]") {
  const MarkovModel m = MarkovModel::cycle(5);
  for (const char* text : {"1", "1/2,1/2", "1/4,1/4,1/2"}) {
    const Partition p = Partition::parse(text);
    const PathMeasure pm = path_measure(m, p);
    CHECK(std::abs(pm.mass() - 1.0) < 1e-12);
    CHECK(marginal_defect(m, p) < 1e-12);
  }
}

TEST_CASE("heat cells are path spaces", "[heat]") {
  for (const char* spec : {"complete(2)", "cycle(5)"}) {
    const MarkovModel m = MarkovModel::named(spec);
    const CellSystem cells(m.standard_form(), family_of(m.semigroup()));
    const HeatPathSystem paths(m);
    int expected = m.states() * m.states();
    for (const char* text : {"1", "1/2,1/2"}) {
      const CellComparison c = compare_heat_cells(cells, paths, Partition::parse(text));
      CHECK(c.cell_dim == expected);
      CHECK(c.path_dim == expected);
      CHECK(c.gram_defect < 1e-10);
      CHECK(c.iso.pass);
      expected *= m.states();
    }
    CHECK(refinement_compatibility(cells, paths, Partition::parse("1/2,1/2"), Partition::parse("1")) < 1e-10);
  }
}

TEST_CASE("the adjoint of the path embedding has an explicit formula", "[heat]") {
  const auto paths = std::make_shared<const HeatPathSystem>(MarkovModel::cycle(5));
  Rng rng(82);
  for (const char* text : {"1", "1/2,1/2"}) {
    const Partition p = Partition::parse(text);
    std::vector<PathFunction> fs;
    for (int i = 0; i < 4; ++i) fs.push_back(random_path_function(rng, 5, static_cast<int>(p.size()) + 1));
    CHECK(b_adjoint_defect(*paths, p, fs) < 1e-12);
  }
}

TEST_CASE("the path dilation compresses to the heat semigroup", "[heat]") {
  const auto paths = std::make_shared<const HeatPathSystem>(MarkovModel::complete(2));
  for (const auto& e : check_path_dilation(paths, Rational(1, 4), 2)) {
    CHECK(e.operator_defect < 1e-10);
    CHECK(e.formula_defect < 1e-10);
    CHECK(e.orbit_defect < 1e-10);
  }
}

TEST_CASE("heat identities at specific points", "[heat]") {
  CHECK(chapman_kolmogorov_defect(MarkovModel::cycle(5), 0.3, 0.7) < 1e-12);

  const MarkovModel three = MarkovModel::cycle(3);
  const CellSystem cells(three.standard_form(), family_of(three.semigroup()));
  const CellComparison c = compare_heat_cells(cells, HeatPathSystem(three), Partition::parse("1/2,1/2"));
  CHECK(c.cell_dim == 27);
  CHECK(c.path_dim == 27);
  CHECK(c.gram_defect < 1e-10);

  Rng rng(83);
  const HeatPathSystem two(MarkovModel::complete(2));
  std::vector<PathFunction> fs{random_path_function(rng, 2, 3), random_path_function(rng, 2, 3)};
  CHECK(b_adjoint_defect(two, Partition::parse("0.4,0.6"), fs) < 1e-12);

  const auto five = std::make_shared<const HeatPathSystem>(MarkovModel::cycle(5));
  for (const auto& e : check_path_dilation(five, Rational(1, 4), 2))
    if (e.k == 2) CHECK(e.operator_defect < 1e-10);
}
