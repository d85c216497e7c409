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
#include "wstar/bimodule.hpp"
#include "wstar/errors.hpp"

using namespace wstar;

namespace {

using fixture::skewed_m2;

CpSemigroup seeded_lindblad(const Algebra& a, std::uint64_t seed) {
  Rng rng(seed);
  return CpSemigroup(a, lindblad_generator(a, {random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)},
                                           random_hermitian(rng, 2)));
}

}  // namespace

TEST_CASE("the inner product formula holds for random words", "[bimodule][property]") {
  const StandardForm sf = skewed_m2();
  const Algebra& a = sf.algebra();
  const CpMap t = seeded_lindblad(a, 31).evaluate(0.5);
  Rng rng(32);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Mat x1 = a.random_element(rng), y1 = a.random_element(rng);
    const Mat x2 = a.random_element(rng), y2 = a.random_element(rng);
    worst = std::max(worst, check_prop_formula(sf, t, x1, y1, x2, y2));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("GNS tensor Gram matrix matches the defining inner product", "[bimodule]") {
  const StandardForm sf = skewed_m2();
  const Algebra& a = sf.algebra();
  const CpMap t = seeded_lindblad(a, 33).evaluate(0.25);
  const GnsTensor g = gns_tensor(sf, t);
  const int d = a.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const cplx got = g.quotient.col(i * d + j).dot(g.quotient.col(k * d + l));
          const Mat m = t(a.basis(i).adjoint() * a.basis(k));
          const cplx want = (a.basis(j).adjoint() * m * a.basis(l)).trace();
          worst = std::max(worst, std::abs(got - want));
        }
  CHECK(worst < 1e-12);
  CHECK(check_bimodule(a, *g.space).max() < 1e-12);
  CHECK(g.space->dim() <= d * d);
}

TEST_CASE("GNS tensor of the identity map is the standard bimodule", "[bimodule]") {
  const StandardForm sf = skewed_m2();
  const GnsTensor g = gns_tensor(sf, CpMap::identity(sf.algebra()));
  CHECK(g.space->dim() == sf.dim());
  const Vec v = g.vector(sf.algebra(), sf.algebra().identity(), sf.cyclic());
  CHECK(std::abs(v.norm() - 1.0) < 1e-12);
}

TEST_CASE("GNS tensor rejects maps that are not completely positive", "[bimodule]") {
  const StandardForm sf = skewed_m2();
  const CpMap transpose = CpMap::from_function(sf.algebra(), [](const Mat& x) { return Mat(x.transpose()); });
  CHECK_THROWS_AS(gns_tensor(sf, transpose), NonCpError);
}

TEST_CASE("relative tensor of the standard bimodule with itself", "[bimodule]") {
  const StandardForm sf = skewed_m2();
  const Algebra& a = sf.algebra();
  const auto l2 = std::make_shared<const Bimodule>(standard_bimodule(sf));
  const RelativeTensor r = relative_tensor(sf, l2, l2);
  CHECK(r.space->dim() == sf.dim());
  CHECK(check_bimodule(a, *r.space).max() < 1e-12);
  Rng rng(34);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Mat a1 = a.random_element(rng), b1 = a.random_element(rng);
    const Mat a2 = a.random_element(rng), b2 = a.random_element(rng);
    const cplx got = r.fuse(sf.right_embed(a1), sf.right_embed(b1)).dot(r.fuse(sf.right_embed(a2), sf.right_embed(b2)));
    const Mat w1 = a1 * b1 * sf.rho_sqrt();
    const Mat w2 = a2 * b2 * sf.rho_sqrt();
    worst = std::max(worst, std::abs(got - (w1.adjoint() * w2).trace()));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("relative tensor of GNS tensors on a block algebra", "[bimodule]") {
  const Algebra a({1, 1});
  const StandardForm sf(a, State::diagonal(a, {0.5, 0.5}));
  const CpSemigroup sg(a, stochastic_pair_generator());
  const auto h = gns_tensor(sf, sg.evaluate(0.5)).space;
  const auto k = gns_tensor(sf, sg.evaluate(0.25)).space;
  const RelativeTensor r = relative_tensor(sf, h, k);
  CHECK(check_bimodule(a, *r.space).max() < 1e-12);
  CHECK(r.space->dim() == 4);
}

TEST_CASE("standard bimodule actions and pi_phi", "[bimodule]") {
  const StandardForm sf = skewed_m2();
  const Bimodule l2 = standard_bimodule(sf);
  CHECK(check_bimodule(sf.algebra(), l2).max() < 1e-12);
  Rng rng(35);
  const Mat x = sf.algebra().random_element(rng);
  const Vec xi = sf.right_embed(x);
  const Vec eta = sf.right_embed(sf.algebra().random_element(rng));
  CHECK((pi_phi(sf, l2, xi) * eta - l2.left_action(sf.algebra().coords(x)) * eta).norm() < 1e-12);
  const Mat m = inner_element(sf, l2, xi, xi);
  CHECK((m - x.adjoint() * x).norm() < 1e-12);
}

TEST_CASE("verify_map measures bilinearity and unitarity", "[bimodule]") {
  const StandardForm sf = skewed_m2();
  const auto l2 = std::make_shared<const Bimodule>(standard_bimodule(sf));
  const int d = sf.dim();
  const MapReport id = verify_map(BimoduleMap{l2, l2, Mat::Identity(d, d)}, MapFlags{true, true, true});
  CHECK(id.pass);
  CHECK(id.unitary_defect < 1e-14);
  Rng rng(36);
  const MapReport rnd = verify_map(BimoduleMap{l2, l2, random_unitary(rng, d)}, MapFlags{true, true, true});
  CHECK_FALSE(rnd.pass);
  CHECK(rnd.isometric_defect < 1e-12);
  CHECK(rnd.bilinear_defect > 1e-3);
}

TEST_CASE("map_from_family detects inconsistent families", "[bimodule]") {
  Rng rng(37);
  Mat source = random_matrix(rng, 4, 3);
  source.col(2) = source.col(0) + source.col(1);
  Mat target = random_matrix(rng, 5, 3);
  CHECK_THROWS_AS(map_from_family(source, target), ConsistencyError);
  target.col(2) = target.col(0) + target.col(1);
  const Mat m = map_from_family(source, target);
  CHECK((m * source - target).norm() < 1e-12);
}
