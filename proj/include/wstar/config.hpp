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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wstar/classify.hpp"
#include "wstar/heatmarkov.hpp"

namespace wstar {

/** Per-suite tolerances; every value must be positive. */
struct Tolerances {
  double cp = 1e-10;
  double cells = 1e-10;
  double refine = 1e-10;
  double roundtrip = 1e-10;
  double dilation = 1e-9;
  double classify = 1e-9;
  double kernel = 1e-12;
  double heat = 1e-10;
  /** Relative cutoff used for Gram ranks. */
  double rank_cutoff = 1e-10;

  Tolerances scaled(double factor) const;
};

struct SemigroupSpec {
  /** "stochastic_pair", "identity", "lindblad", "unitary_conjugation" or "generator". */
  std::string kind = "identity";
  std::vector<Mat> jumps;
  Mat hamiltonian;
  Mat generator;
};

struct E0Spec {
  /** "identity", "inner", "stepped", "cocycle_perturbation" or "broken". */
  std::string kind = "identity";
  Mat matrix;
  Rational delta{0};
  Rational from{0};
};

struct ClassifySpec {
  E0Spec alpha;
  E0Spec beta;
  /** "equivalent", "inequivalent" or empty for no expectation. */
  std::string expect;
};

struct HeatSpec {
  std::string graph;
  std::vector<double> mu;
  RealMat laplacian;
  std::vector<Partition> partitions;
  Rational delta{1, 4};
  int levels = 2;
  std::vector<double> times;
};

struct ExperimentConfig {
  std::vector<int> blocks{1};
  /** "tracial", "diagonal" or "density". */
  std::string state_kind = "tracial";
  std::vector<double> diagonal;
  Mat density;
  SemigroupSpec semigroup;
  std::vector<Partition> partitions;
  Rational delta{1, 2};
  int levels = 2;
  /** Grid times requested from the dilation suite; may exceed the horizon. */
  std::vector<Rational> probe_times;
  int refine_depth = 2;
  /** Starting points of the dyadic refinement chains; defaults to `partitions`. */
  std::vector<Partition> refine_partitions;
  int random_samples = 20;
  std::vector<std::string> suites;
  std::uint64_t seed = 0x5eed2026ULL;
  Tolerances tolerances;
  std::optional<ClassifySpec> classify;
  std::optional<HeatSpec> heat;
  std::string output_dir = "wstar_out";
  std::string source = "<memory>";
};

/** Parses JSON text; errors name the offending field or the line and column of a syntax error. */
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<memory>");
ExperimentConfig load_config(const std::string& path);

Algebra build_algebra(const ExperimentConfig& config);
StandardForm build_standard_form(const ExperimentConfig& config);
CpSemigroup build_semigroup(const ExperimentConfig& config);
/** cocycle_perturbation and broken specs are relative to `base`; a random perturbation is drawn from `seed`. */
E0Semigroup build_e0(const Algebra& algebra, const E0Spec& spec, const E0Semigroup* base = nullptr,
                     std::uint64_t seed = 0);
MarkovModel build_markov(const HeatSpec& spec);

}  // namespace wstar
