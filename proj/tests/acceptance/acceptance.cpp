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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "wstar/classify.hpp"
#include "wstar/dilation.hpp"
#include "wstar/errors.hpp"
#include "wstar/heatmarkov.hpp"

using namespace wstar;

namespace {

constexpr double kRankCutoff = 1e-10;
constexpr double kDimensionSeconds = 5.0;
constexpr double kPropTol = 1e-10;
constexpr double kRefineTol = 1e-10;
constexpr double kRoundtripTol = 1e-10;
constexpr double kDilationTol = 1e-9;
constexpr double kDilationSeconds = 60.0;
constexpr double kCocycleTol = 1e-9;
constexpr double kKernelTol = 1e-12;
constexpr double kGramTol = 1e-10;
constexpr double kAdjointTol = 1e-12;
constexpr double kPathDilationTol = 1e-10;
constexpr double kClassifyTol = 1e-9;

constexpr std::uint64_t kPropSeed = 0xa11ce;
constexpr std::uint64_t kLindbladSeed = 2026;
constexpr std::uint64_t kUnitSeed = 0x0b0b;
constexpr std::uint64_t kCocycleSeed = 0xc0c0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::shared_ptr<CellSystem> pair_cells() {
  return std::make_shared<CellSystem>(fixture::stochastic_pair_form(), family_of(fixture::stochastic_pair()));
}

Partition skewed(const Rational& total, int n) {
  std::vector<Rational> parts;
  Rational rest = total;
  for (int i = 0; i + 1 < n; ++i) {
    parts.push_back(rest / Rational(2));
    rest -= parts.back();
  }
  parts.push_back(rest);
  return Partition(parts);
}

Outcome dimension_law() {
  const auto start = Clock::now();
  const auto cells = pair_cells();
  int checked = 0, wrong = 0;
  for (const Rational& t : {Rational(1, 2), Rational(1), Rational(2)}) {
    for (int n = 1; n <= 6; ++n) {
      for (const Partition& p : {Partition::uniform(t / Rational(n), n), skewed(t, n)}) {
        const Mat& q = n == 1 ? cells->gns(p[0]).quotient : cells->cell_fusion(p)->quotient;
        const int rank = numerical_rank(q, kRankCutoff);
        if (cells->fiber(p)->dim() != n + 2 || rank != n + 2) ++wrong;
        ++checked;
      }
    }
  }
  const double secs = seconds_since(start);
  return {wrong == 0 && secs < kDimensionSeconds,
          std::to_string(checked) + " partitions, " + std::to_string(wrong) + " mismatches, " + sci(secs) + " s"};
}

Outcome prop_formula() {
  const StandardForm sf = fixture::skewed_m2();
  const Algebra& a = sf.algebra();
  Rng rng(kPropSeed);
  const CpSemigroup sg(a, lindblad_generator(a, {random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)},
                                             random_hermitian(rng, 2)));
  const CpMap t = sg.evaluate(0.5);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Mat x1 = a.random_element(rng), y1 = a.random_element(rng);
    const Mat x2 = a.random_element(rng), y2 = a.random_element(rng);
    worst = std::max(worst, check_prop_formula(sf, t, x1, y1, x2, y2));
  }
  return {worst <= kPropTol, "100 cases, max defect " + sci(worst)};
}

Outcome refinement_net() {
  const auto cells = pair_cells();
  const std::vector<std::vector<Partition>> chains{
      {Partition::parse("1"), Partition::uniform(Rational(1, 2), 2), Partition::uniform(Rational(1, 4), 4),
       Partition::uniform(Rational(1, 8), 8), Partition::uniform(Rational(1, 16), 16)},
      {Partition::parse("1"), Partition::parse("1/2,1/2"), Partition::parse("1/4,1/4,1/2"),
       Partition::parse("1/8,1/8,1/4,1/2"), Partition::parse("1/16,1/16,1/8,1/4,1/2")}};
  double worst = 0.0;
  int maps = 0;
  for (const auto& chain : chains) {
    for (std::size_t i = 0; i < chain.size(); ++i) {
      for (std::size_t j = i + 1; j < chain.size(); ++j) {
        const MapReport r = verify_map(refinement_isometry(*cells, chain[j], chain[i]), MapFlags{true, true, false});
        worst = std::max({worst, r.isometric_defect, r.bilinear_defect});
        ++maps;
        for (std::size_t k = j + 1; k < chain.size(); ++k) {
          const Mat lhs = cells->refine(chain[k], chain[j]) * cells->refine(chain[j], chain[i]);
          worst = std::max(worst, op_norm(lhs - cells->refine(chain[k], chain[i])));
        }
      }
    }
  }
  return {worst <= kRefineTol, std::to_string(maps) + " maps to 16 parts, max defect " + sci(worst)};
}

double roundtrip_distance(const std::shared_ptr<CellSystem>& cells, const CpSemigroup& sg, const Rational& delta,
                          int levels) {
  std::vector<Rational> times;
  for (int k = 0; k <= levels; ++k) times.push_back(delta * static_cast<std::int64_t>(k));
  const Unit unit = canonical_unit(*cells, times);
  double worst = 0.0;
  for (const auto& t : times) worst = std::max(worst, map_distance(cp_from_unit_at(*cells, unit, t), sg.evaluate(t)));
  return worst;
}

Outcome roundtrip() {
  const double pair = roundtrip_distance(pair_cells(), fixture::stochastic_pair(), Rational(1, 4), 8);
  const CpSemigroup sg = fixture::lindblad_m2(kLindbladSeed);
  const auto cells = std::make_shared<CellSystem>(fixture::skewed_m2(), family_of(sg));
  const double lindblad = roundtrip_distance(cells, sg, Rational(1, 8), 8);
  return {std::max(pair, lindblad) <= kRoundtripTol,
          "stochastic_pair " + sci(pair) + ", Lindblad M2 " + sci(lindblad)};
}

Outcome dilation() {
  const auto start = Clock::now();
  const auto cells = pair_cells();
  const CpSemigroup sg = fixture::stochastic_pair();
  const TruncatedLimit tl(cells, Rational(1, 8), 8);
  const Algebra& a = cells->algebra();
  double worst = 0.0;
  for (int k = 0; k <= 7; ++k) {
    const CpMap tk = sg.evaluate(Rational(k, 8));
    for (int e = 0; e < a.dim(); ++e) worst = std::max(worst, compression_defect(tl, tk, k, a.basis(e)));
  }
  const MinimalityReport m = minimality_evidence(tl);
  const double secs = seconds_since(start);
  return {worst <= kDilationTol && m.full && secs < kDilationSeconds,
          "compression " + sci(worst) + ", span " + std::to_string(m.span_rank) + "/" + std::to_string(m.dim) + ", " +
              sci(secs) + " s"};
}

Outcome units_and_cocycles() {
  const auto cells = std::make_shared<CellSystem>(fixture::skewed_m2(), family_of(fixture::lindblad_m2()));
  const TruncatedLimit tl(cells, Rational(1, 8), 2);
  Rng rng(kUnitSeed);
  double worst = 0.0;
  for (int s = 0; s < 3; ++s) {
    const Vec eta = tl.unit_vector(1) + 0.3 * random_matrix(rng, tl.dim(1), 1).col(0);
    GridUnit u = grid_unit_from_generator(tl, eta);
    u = scale_grid_unit(u, cplx(0.9 / std::sqrt(std::max(1.0, grid_unit_norm(tl, u))), 0.0));
    const Cocycle w = cocycle_from_unit(tl, u);
    worst = std::max({worst, unit_distance(unit_from_cocycle(tl, w), u),
                      cocycle_distance(cocycle_from_unit(tl, unit_from_cocycle(tl, w)), w), cocycle_law_defect(tl, w)});
  }
  const GridUnit unital = canonical_grid_unit(tl);
  const Cocycle w = cocycle_from_unit(tl, unital);
  const double corner = corner_isometry_defect(tl, w);
  worst = std::max({worst, corner, unit_distance(unit_from_cocycle(tl, w), unital)});
  return {worst <= kCocycleTol, "3 contractive units and the unital unit, max defect " + sci(worst) +
                                    ", corner isometry " + sci(corner)};
}

Outcome heat() {
  double kernel = 0.0, gram = 0.0, adjoint = 0.0, path = 0.0;
  bool dims = true;
  Rng rng(kUnitSeed);
  for (const char* spec : {"complete(2)", "cycle(5)"}) {
    const MarkovModel m = MarkovModel::named(spec);
    const KernelReport k = kernel_report(m, {0.25, 0.5, 1.0, 2.0});
    kernel = std::max({kernel, k.symmetry_defect, k.mass_defect, k.chapman_kolmogorov_defect,
                       std::max(0.0, -k.min_entry)});
    const CellSystem cells(m.standard_form(), family_of(m.semigroup()));
    const auto paths = std::make_shared<const HeatPathSystem>(m);
    for (const char* text : {"1", "1/2,1/2"}) {
      const Partition p = Partition::parse(text);
      const CellComparison c = compare_heat_cells(cells, *paths, p);
      gram = std::max(gram, c.gram_defect);
      dims = dims && c.cell_dim == c.path_dim;
      std::vector<PathFunction> fs;
      for (int i = 0; i < 4; ++i) {
        PathFunction f = PathFunction::constant(m.states(), static_cast<int>(p.size()) + 1, 0.0);
        for (auto& v : f.values) v = random_matrix(rng, 1, 1)(0, 0);
        fs.push_back(f);
      }
      adjoint = std::max(adjoint, b_adjoint_defect(*paths, p, fs));
    }
    for (const auto& e : check_path_dilation(paths, Rational(1, 4), 2))
      path = std::max({path, e.operator_defect, e.formula_defect, e.orbit_defect});
  }
  return {kernel <= kKernelTol && gram <= kGramTol && dims && adjoint <= kAdjointTol && path <= kPathDilationTol,
          "kernel " + sci(kernel) + ", gram " + sci(gram) + ", adjoint " + sci(adjoint) + ", path dilation " + sci(path)};
}

Outcome classifier() {
  const StandardForm sf = fixture::skewed_m2();
  const Algebra& a = sf.algebra();
  Mat k(2, 2);
  k << 1.0, 0.5, 0.5, -1.0;
  const E0Semigroup alpha = E0Semigroup::inner(a, k);
  Rng rng(kCocycleSeed);
  const Mat m = random_hermitian(rng, 2);
  const E0Semigroup beta = E0Semigroup::implemented(
      a,
      [alpha, m](const Rational& t) {
        const Mat cocycle = alpha.unitary(t).adjoint() * expm(cplx(0.0, to_double(t)) * m);
        return Mat(alpha.unitary(t) * cocycle);
      },
      "perturbed");
  const EquivalenceReport eq = cocycle_equivalence(sf, alpha, beta, Rational(1, 4), 4, kCocycleSeed);
  double residual = eq.cocycle_law_defect;
  for (const auto& s : eq.steps) residual = std::max({residual, s.conjugation_defect, s.unitarity_defect});

  Mat swap = Mat::Zero(2, 2);
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  const E0Semigroup broken = E0Semigroup::implemented(
      a, [alpha, swap](const Rational& t) { return t < Rational(3, 4) ? alpha.unitary(t) : Mat(alpha.unitary(t) * swap); },
      "broken");
  const StandardForm tracial(a, State::tracial(a));
  const EquivalenceReport bad = cocycle_equivalence(tracial, alpha, broken, Rational(1, 4), 4, kCocycleSeed);
  const bool named = !bad.equivalent && bad.failing_time && *bad.failing_time == Rational(3, 4);
  return {eq.equivalent && residual <= kClassifyTol && named,
          std::string(eq.equivalent ? "equivalent" : "not equivalent") + " with residual " + sci(residual) +
              "; broken: " + (bad.failing_time ? "fails at t=" + to_string(*bad.failing_time) : "no failing time")};
}

Outcome continuity() {
  std::vector<std::vector<double>> rows;
  for (int den : {4, 8, 16}) {
    const TruncatedLimit tl(pair_cells(), Rational(1, den), 1);
    std::vector<double> row(2, 0.0);
    for (const auto& c : continuity_profile(tl))
      if (c.k == 1) row[c.basis] = c.value;
    rows.push_back(row);
  }
  bool decreasing = true;
  std::string detail;
  for (int e = 0; e < 2; ++e) {
    decreasing = decreasing && rows[1][e] < rows[0][e] && rows[2][e] < rows[1][e];
    detail += (e ? "; x" : "x") + std::to_string(e) + ": " + sci(rows[0][e]) + " > " + sci(rows[1][e]) + " > " +
              sci(rows[2][e]);
  }
  return {decreasing, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"dimension law for the stochastic pair", dimension_law},
      {"inner product formula on M2", prop_formula},
      {"refinement net along dyadic chains", refinement_net},
      {"semigroup recovered from the canonical unit", roundtrip},
      {"dilation at delta=1/8, n=8", dilation},
      {"unit and cocycle correspondence", units_and_cocycles},
      {"heat semigroups on the two-state chain and the 5-cycle", heat},
      {"cocycle classifier", classifier},
      {"continuity profile at t=delta", continuity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
