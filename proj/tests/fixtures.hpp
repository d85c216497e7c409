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

// Shared test systems.

#pragma once

#include <cstdint>

#include "wstar/cpdyn.hpp"

namespace fixture {

using wstar::Algebra;
using wstar::cplx;
using wstar::Mat;

/** Faithful non-tracial state on M_2 with a complex off-diagonal entry. */
inline wstar::StandardForm skewed_m2() {
  Mat rho(2, 2);
  rho << 0.7, cplx(0.1, 0.05), cplx(0.1, -0.05), 0.3;
  const Algebra a({2});
  return wstar::StandardForm(a, wstar::State(a, rho));
}

inline wstar::StandardForm stochastic_pair_form() {
  const Algebra a({1, 1});
  return wstar::StandardForm(a, wstar::State::diagonal(a, {0.5, 0.5}));
}

/**
 * Lindblad semigroup on M_2 with three jumps of comparable strength. The
 * seed perturbs the jump amplitudes and the Hamiltonian.
 */
inline wstar::CpSemigroup lindblad_m2(std::uint64_t seed = 0) {
  const Algebra a({2});
  wstar::Rng rng(seed);
  std::uniform_real_distribution<double> amp(0.5, 0.9);
  Mat lower = Mat::Zero(2, 2), upper = Mat::Zero(2, 2), dephase = Mat::Zero(2, 2);
  upper(0, 1) = seed ? amp(rng) : 0.8;
  lower(1, 0) = seed ? amp(rng) : 0.6;
  dephase(0, 0) = 0.5;
  dephase(1, 1) = -0.5;
  Mat h(2, 2);
  h << 1.0, 0.2, 0.2, -1.0;
  if (seed) h += 0.3 * wstar::random_hermitian(rng, 2);
  return wstar::CpSemigroup(a, wstar::lindblad_generator(a, {upper, dephase, lower}, h));
}

inline wstar::CpSemigroup stochastic_pair() {
  return wstar::CpSemigroup(Algebra({1, 1}), wstar::stochastic_pair_generator());
}

}  // namespace fixture
