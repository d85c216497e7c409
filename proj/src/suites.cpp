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


#include "wstar/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <set>
#include <sstream>

namespace wstar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string pid(const Partition& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "|" : "") + to_string(p[i]);
  return s;
}

std::string tid(const Rational& t) { return "t=" + to_string(t); }

Rational grid_time(const Rational& delta, int k) { return delta * static_cast<std::int64_t>(k); }

std::vector<Rational> grid_times(const ExperimentConfig& cfg) {
  std::vector<Rational> out;
  for (int k = 1; k <= cfg.levels; ++k) out.push_back(grid_time(cfg.delta, k));
  return out;
}

std::vector<Partition> partitions_of(const ExperimentConfig& cfg) {
  if (!cfg.partitions.empty()) return cfg.partitions;
  std::vector<Partition> out;
  for (int k = 1; k <= std::min(cfg.levels, 3); ++k) out.push_back(Partition::uniform(cfg.delta, k));
  return out;
}

Partition halve(const Partition& p) {
  std::vector<Rational> parts;
  for (const auto& r : p.parts()) {
    parts.push_back(r / Rational(2));
    parts.push_back(r / Rational(2));
  }
  return Partition(parts);
}

Rng suite_rng(const ExperimentConfig& cfg, const std::string& name) {
  std::seed_seq seq(name.begin(), name.end());
  std::vector<std::uint64_t> mix(1);
  seq.generate(mix.begin(), mix.end());
  return Rng(cfg.seed ^ mix[0]);
}

class Recorder {
 public:
  Recorder(SuiteResult& result, std::string suite) : result_(result), suite_(std::move(suite)) {}
  void operator()(std::string id, std::string anchor, double defect, double tol) {
    result_.records.push_back(make_check(suite_, std::move(id), std::move(anchor), defect, tol));
  }

 private:
  SuiteResult& result_;
  std::string suite_;
};

double map_report_defect(const MapReport& r, bool unitary) {
  return std::max(r.bilinear_defect, unitary ? r.unitary_defect : r.isometric_defect);
}

/** Compares (xi eta) zeta with xi (eta zeta) under the product unitaries on random vectors. */
double associativity_defect(const ProductSystem& sys, const Partition& a, const Partition& b, const Partition& c,
                            Rng& rng, int samples) {
  const auto ab = sys.fusion(a, b);
  const auto bc = sys.fusion(b, c);
  const Partition a_b = join(a, b);
  const Partition b_c = join(b, c);
  const auto ab_c = sys.fusion(a_b, c);
  const auto a_bc = sys.fusion(a, b_c);
  const Mat u_ab = sys.product(a, b), u_bc = sys.product(b, c);
  const Mat u_ab_c = sys.product(a_b, c), u_a_bc = sys.product(a, b_c);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec xi = random_matrix(rng, sys.fiber(a)->dim(), 1).col(0).normalized();
    const Vec eta = random_matrix(rng, sys.fiber(b)->dim(), 1).col(0).normalized();
    const Vec zeta = random_matrix(rng, sys.fiber(c)->dim(), 1).col(0).normalized();
    const Vec left = u_ab_c * ab_c->fuse(u_ab * ab->fuse(xi, eta), zeta);
    const Vec right = u_a_bc * a_bc->fuse(xi, u_bc * bc->fuse(eta, zeta));
    worst = std::max(worst, (left - right).norm() / std::max(1.0, left.norm()));
  }
  return worst;
}

SuiteResult suite_check_cp(const ExperimentConfig& cfg) {
  SuiteResult res{"check-cp", {}, {}, {}, {}};
  Recorder rec(res, res.name);
  const double tol = cfg.tolerances.cp;
  const StandardForm sf = build_standard_form(cfg);
  const CpSemigroup sg = build_semigroup(cfg);
  const Algebra& alg = sf.algebra();
  rec("generator-unital", "generator annihilates the unit", (sg.generator() * alg.coords(alg.identity())).norm(), tol);
  const auto times = grid_times(cfg);
  for (const auto& t : times) {
    const UcpReport r = verify_ucp(sg.evaluate(t), tol);
    rec("unital[" + tid(t) + "]", "unital CP map", r.unital_defect, tol);
    rec("choi-positive[" + tid(t) + "]", "Choi matrix positivity", std::max(0.0, -r.choi_min_eigenvalue), tol);
  }
  double law = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t j = 0; i + j + 1 < times.size(); ++j)
      law = std::max(law, semigroup_law_defect(sg, to_double(times[i]), to_double(times[j])));
  rec("semigroup-law", "T_s T_t = T_{s+t}", law, tol);
  Rng rng = suite_rng(cfg, res.name);
  const CpMap t0 = sg.evaluate(cfg.delta);
  double prop = 0.0;
  for (int s = 0; s < cfg.random_samples; ++s) {
    const Mat x1 = alg.random_element(rng), y1 = alg.random_element(rng);
    const Mat x2 = alg.random_element(rng), y2 = alg.random_element(rng);
    prop = std::max(prop, check_prop_formula(sf, t0, x1, y1, x2, y2));
  }
  rec("gns-inner-product[" + tid(cfg.delta) + "]", "GNS tensor inner product formula", prop, tol);
  res.notes.push_back("check-cp: " + std::to_string(cfg.random_samples) + " random quadruples at t = " +
                      to_string(cfg.delta));
  return res;
}

SuiteResult suite_cells(const ExperimentConfig& cfg) {
  SuiteResult res{"cells", {}, {}, {}, {}};
  Recorder rec(res, res.name);
  const double tol = cfg.tolerances.cells;
  const StandardForm sf = build_standard_form(cfg);
  const CpSemigroup sg = build_semigroup(cfg);
  auto cells = std::make_shared<CellSystem>(sf, family_of(sg));
  const Algebra& alg = sf.algebra();
  const auto parts = partitions_of(cfg);
  for (const auto& p : parts) {
    const Cell cell = build_cell(*cells, p);
    const int dim = cell.space->dim();
    res.notes.push_back("cells: dim H(" + pid(p) + ") = " + std::to_string(dim));
    rec("bimodule[" + pid(p) + "]", "cell is a bimodule", check_bimodule(alg, *cell.space).max(), tol);
    if (cfg.semigroup.kind == "stochastic_pair")
      rec("dimension-law[" + pid(p) + "] dim=" + std::to_string(dim), "cell dimension #p+2",
          std::abs(dim - static_cast<double>(p.size() + 2)), 0.0);
    if (p.size() >= 2) {
      const MapReport r = verify_map(multiply_cells(*cells, p.prefix(1), p.suffix_from(1)),
                                     MapFlags{true, false, true}, tol);
      rec("product-unitary[" + pid(p) + "]", "cell multiplication is a bimodule unitary",
          map_report_defect(r, true), tol);
    }
  }
  Rng rng = suite_rng(cfg, res.name);
  for (const auto& p : parts) {
    if (p.size() < 3) continue;
    const Partition a = p.prefix(1), b = p.suffix_from(1).prefix(1), c = p.suffix_from(2);
    rec("associativity[" + pid(p) + "]", "product associativity",
        associativity_defect(*cells, a, b, c, rng, cfg.random_samples), tol);
  }
  std::set<Rational> sampled;
  for (const auto& t : grid_times(cfg)) sampled.insert(t);
  for (const auto& p : parts) sampled.insert(p.total());
  const Unit unit = canonical_unit(*cells, std::vector<Rational>(sampled.begin(), sampled.end()));
  rec("unit-unital", "unit vectors are unital", unit_unital_defect(*cells, unit), tol);
  rec("unit-factorization", "unit factorizes under products", unit_factorization_defect(*cells, unit), tol);
  return res;
}

SuiteResult suite_refine(const ExperimentConfig& cfg) {
  SuiteResult res{"refine", {}, {}, {}, {}};
  Recorder rec(res, res.name);
  const double tol = cfg.tolerances.refine;
  const StandardForm sf = build_standard_form(cfg);
  const CpSemigroup sg = build_semigroup(cfg);
  auto cells = std::make_shared<CellSystem>(sf, family_of(sg));
  for (const auto& p : cfg.refine_partitions.empty() ? partitions_of(cfg) : cfg.refine_partitions) {
    std::vector<Partition> chain{p};
    for (int d = 0; d < cfg.refine_depth; ++d) chain.push_back(halve(chain.back()));
    double iso = 0.0, comp = 0.0, unit = 0.0;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      for (std::size_t j = i + 1; j < chain.size(); ++j) {
        const MapReport r = verify_map(refinement_isometry(*cells, chain[j], chain[i]), MapFlags{true, true, false}, tol);
        iso = std::max(iso, map_report_defect(r, false));
        unit = std::max(unit, (cells->refine(chain[j], chain[i]) * cells->unit(chain[i]) - cells->unit(chain[j])).norm());
        for (std::size_t k = j + 1; k < chain.size(); ++k)
          comp = std::max(comp, op_norm(cells->refine(chain[k], chain[j]) * cells->refine(chain[j], chain[i]) -
                                        cells->refine(chain[k], chain[i])));
      }
    }
    const std::string id = pid(p) + " depth " + std::to_string(cfg.refine_depth);
    rec("isometric[" + id + "]", "refinement maps are bimodule isometries", iso, tol);
    rec("composition[" + id + "]", "refinement composition law", comp, tol);
    rec("unit-compatible[" + id + "]", "refinement preserves the unit", unit, tol);
    res.notes.push_back("refine: chain from " + pid(p) + " to " + pid(chain.back()) + ", top dim " +
                        std::to_string(cells->fiber(chain.back())->dim()));
  }
  return res;
}

SuiteResult suite_roundtrip(const ExperimentConfig& cfg) {
  SuiteResult res{"roundtrip", {}, {}, {}, {}};
  Recorder rec(res, res.name);
  const double tol = cfg.tolerances.roundtrip;
  const StandardForm sf = build_standard_form(cfg);
  const CpSemigroup sg = build_semigroup(cfg);
  auto cells = std::make_shared<CellSystem>(sf, family_of(sg));
  const auto parts = partitions_of(cfg);
  std::set<Rational> sampled;
  for (const auto& t : grid_times(cfg)) sampled.insert(t);
  for (const auto& p : parts)
    for (const auto& r : p.parts()) sampled.insert(r);
  const Unit unit = canonical_unit(*cells, std::vector<Rational>(sampled.begin(), sampled.end()));
  const auto recovered = cp_from_unit(*cells, unit);
  double dist = 0.0;
  for (const auto& t : grid_times(cfg)) dist = std::max(dist, map_distance(recovered.at(t), sg.evaluate(t)));
  rec("recovered-semigroup", "T from the canonical unit equals T", dist, tol);
  rec("recovered-semigroup-law", "recovered family is a semigroup", family_semigroup_defect(recovered), tol);
  const GeneratingReport gen = generating_test(*cells, unit, parts);
  double missing = 0.0;
  for (const auto& l : gen.levels) missing += l.dim - l.rank;
  rec("unit-generating", "unit words span the cells", missing, 0.0);
  res.notes.push_back("roundtrip: generating sampling " + gen.sampling);
  CellSystem rebuilt(sf, family_from_unit(cells, unit));
  for (const auto& p : parts) {
    const RoundtripIso iso = roundtrip_iso(rebuilt, *cells, unit, p, tol);
    rec("cell-iso[" + pid(p) + "]", "cells of T^Xi map unitarily onto Xi", map_report_defect(iso.report, true), tol);
    if (p.size() >= 2)
      rec("iso-compatibility[" + pid(p) + "]", "cell isomorphisms intertwine products",
          roundtrip_compatibility_defect(rebuilt, *cells, unit, p.prefix(1), p.suffix_from(1)), tol);
  }
  return res;
}

SuiteResult suite_dilate(const ExperimentConfig& cfg) {
  SuiteResult res{"dilate", {}, {}, {}, {}};
  Recorder rec(res, res.name);
  const double tol = cfg.tolerances.dilation;
  const StandardForm sf = build_standard_form(cfg);
  const CpSemigroup sg = build_semigroup(cfg);
  const Algebra& alg = sf.algebra();
  auto cells = std::make_shared<CellSystem>(sf, family_of(sg));
  const TruncatedLimit tl(cells, cfg.delta, cfg.levels);
  const int n = cfg.levels;
  rec("embedding-composition", "connecting maps compose", tl.composition_defect(), tol);
  rec("embedding-isometric", "connecting maps are right linear isometries", tl.embedding_defect(), tol);

  std::vector<std::vector<double>> comp(n + 1, std::vector<double>(alg.dim())), corner = comp, cont = comp;
  double comp_max = 0.0, corner_max = 0.0;
  for (int k = 0; k <= n; ++k) {
    const CpMap tk = sg.evaluate(grid_time(cfg.delta, k));
    for (int e = 0; e < alg.dim(); ++e) {
      comp[k][e] = compression_defect(tl, tk, k, alg.basis(e));
      corner[k][e] = corner_defect(tl, tk, k, alg.basis(e));
      comp_max = std::max(comp_max, comp[k][e]);
      corner_max = std::max(corner_max, corner[k][e]);
    }
  }
  for (const auto& c : continuity_profile(tl)) cont[c.k][c.basis] = c.value;
  rec("compression", "corner compression of the dilation is T", comp_max, tol);
  rec("corner", "p theta_t(pi(x)) p = pi(T_t(x))", corner_max, tol);

  Rng rng = suite_rng(cfg, res.name);
  double law = 0.0, mult = 0.0;
  for (int s = 0; s < std::max(1, cfg.random_samples / 10); ++s) {
    const TruncOp a = tl.represent(alg.random_element(rng));
    const TruncOp b = tl.represent(alg.random_element(rng));
    for (int j = 0; j <= n; ++j) {
      mult = std::max(mult, op_norm(tl.dilate(j, a * b).op - (tl.dilate(j, a) * tl.dilate(j, b)).op));
      for (int k = 0; j + k <= n; ++k)
        law = std::max(law, op_norm(tl.dilate(j, tl.dilate(k, a)).op - tl.dilate(j + k, a).op));
    }
  }
  rec("theta-semigroup", "theta_s theta_t = theta_{s+t}", law, tol);
  rec("theta-multiplicative", "theta_t is multiplicative", mult, tol);
  rec("theta-unital", "theta_t(1) = 1", op_norm(tl.dilate(n, tl.identity()).op - tl.identity().op), tol);
  const MinimalityReport mini = minimality_evidence(tl);
  rec("minimality", "orbit of the corner spans the top level", static_cast<double>(mini.dim - mini.span_rank), 0.0);
  res.notes.push_back("dilate: minimality span " + std::to_string(mini.span_rank) + "/" + std::to_string(mini.dim) +
                      " (" + mini.sampling + ")");
  std::vector<Mat> xs;
  auto unit_ball = [&] {
    const Mat x = alg.random_element(rng);
    return Mat(x / op_norm(x));
  };
  for (int i = 0; i < n; ++i) xs.push_back(unit_ball());
  rec("orbit-formula", "orbit vectors are embedded words", orbit_formula_defect(tl, xs, unit_ball()), tol);

  const GridUnit canonical = canonical_grid_unit(tl);
  const std::pair<std::string, GridUnit> units[] = {{"canonical", canonical},
                                                    {"scaled", scale_grid_unit(canonical, cplx(0.8, 0.0))}};
  for (const auto& [label, u] : units) {
    const Cocycle w = cocycle_from_unit(tl, u);
    rec("cocycle-law[" + label + "]", "w_{s+t} = theta_t(w_s) w_t", cocycle_law_defect(tl, w), tol);
    rec("cocycle-adapted[" + label + "]", "cocycle is adapted", adaptedness_defect(tl, w), tol);
    rec("unit-cocycle-unit[" + label + "]", "unit to cocycle to unit", unit_distance(unit_from_cocycle(tl, w), u), tol);
    rec("cocycle-unit-cocycle[" + label + "]", "cocycle to unit to cocycle",
        cocycle_distance(cocycle_from_unit(tl, unit_from_cocycle(tl, w)), w), tol);
    if (label == "canonical") rec("cocycle-corner-isometry", "unital unit gives a corner isometry",
                                  corner_isometry_defect(tl, w), tol);
  }

  for (const auto& t : cfg.probe_times) {
    try {
      const int k = tl.grid_index(t);
      const CpMap tk = sg.evaluate(t);
      double worst = 0.0;
      for (int e = 0; e < alg.dim(); ++e) worst = std::max(worst, compression_defect(tl, tk, k, alg.basis(e)));
      rec("probe[" + tid(t) + "]", "compression at a requested time", worst, tol);
    } catch (const TruncationError& e) {
      rec("probe[" + tid(t) + "]", "compression at a requested time", kInf, tol);
      res.errors.push_back(std::string("dilate: ") + e.what());
      res.notes.push_back("dilate: probe " + tid(t) + " rejected, max admissible t = " + e.max_admissible());
    }
  }

  std::ostringstream table;
  table << "# delta=" << to_string(cfg.delta) << " levels=" << n << " horizon=" << to_string(tl.horizon())
        << " top_dim=" << tl.top_dim() << "\n";
  table << "k,t,basis,compression_defect,corner_defect,continuity\n";
  for (int k = 0; k <= n; ++k)
    for (int e = 0; e < alg.dim(); ++e)
      table << k << ',' << to_string(grid_time(cfg.delta, k)) << ',' << alg.basis_label(e) << ','
            << format_double(comp[k][e]) << ',' << format_double(corner[k][e]) << ',' << format_double(cont[k][e])
            << '\n';
  res.artifacts.push_back({"dilation_residuals.csv", table.str()});
  return res;
}

SuiteResult suite_classify(const ExperimentConfig& cfg) {
  SuiteResult res{"classify", {}, {}, {}, {}};
  Recorder rec(res, res.name);
  const double tol = cfg.tolerances.classify;
  const StandardForm sf = build_standard_form(cfg);
  const Algebra& alg = sf.algebra();
  ClassifySpec spec;
  if (cfg.classify) {
    spec = *cfg.classify;
  } else {
    spec.expect = "equivalent";
    res.notes.push_back("classify: no classify section, comparing the identity semigroup with itself");
  }
  const E0Semigroup alpha = build_e0(alg, spec.alpha);
  const E0Semigroup beta = build_e0(alg, spec.beta, &alpha, cfg.seed);
  const auto times = grid_times(cfg);
  std::vector<Rational> with_zero{Rational(0)};
  with_zero.insert(with_zero.end(), times.begin(), times.end());
  rec("alpha-endomorphism", "alpha_t is a unital *-endomorphism", e0_endomorphism_defect(alpha, times), tol);
  rec("alpha-semigroup", "alpha is a semigroup", e0_semigroup_defect(alpha, with_zero), tol);
  rec("beta-endomorphism", "beta_t is a unital *-endomorphism", e0_endomorphism_defect(beta, times), tol);
  res.notes.push_back("classify: beta semigroup defect " + format_double(e0_semigroup_defect(beta, with_zero)) +
                      " (" + beta.label() + ")");

  auto cells = std::make_shared<CellSystem>(sf, alpha.family());
  auto twisted = std::make_shared<TwistedSystem>(sf, alpha);
  const Unit unit = canonical_unit(*twisted, times);
  double recovered = 0.0;
  for (const auto& t : times) recovered = std::max(recovered, map_distance(cp_from_unit_at(*twisted, unit, t), alpha.evaluate(t)));
  rec("twisted-unit-semigroup", "twisted unit recovers alpha", recovered, tol);
  for (int k = 1; k <= std::min(cfg.levels, 3); ++k) {
    const Partition p = Partition::uniform(cfg.delta, k);
    const CanonicalIso iso = canonical_iso(*cells, *twisted, p, tol);
    rec("twisted-iso[" + pid(p) + "]", "cells of alpha are the twisted cells", map_report_defect(iso.report, true), tol);
    rec("twisted-iso-unit[" + pid(p) + "]", "twisted isomorphism preserves the unit", iso.unit_defect, tol);
  }

  auto certify = [&](const E0Semigroup& a, const E0Semigroup& b, const std::string& dir) {
    const EquivalenceReport r = cocycle_equivalence(sf, a, b, cfg.delta, cfg.levels, cfg.seed, tol);
    double residual = 0.0;
    for (const auto& s : r.steps)
      residual = std::max({residual, s.conjugation_defect, s.unitarity_defect, s.backward_defect});
    if (r.equivalent) {
      res.notes.push_back("classify[" + dir + "]: equivalent, cocycle law defect " + format_double(r.cocycle_law_defect) +
                          ", continuity modulus " + format_double(r.continuity_modulus));
    } else {
      res.notes.push_back("classify[" + dir + "]: not equivalent, first failing grid time " +
                          (r.failing_time ? to_string(*r.failing_time) : std::string("none")) + ": " + r.reason);
    }
    if (spec.expect == "equivalent") {
      rec("equivalent[" + dir + "]", "cocycle conjugacy certificate", r.equivalent ? residual : kInf, tol);
      rec("cocycle-law[" + dir + "]", "certified w is a cocycle", r.equivalent ? r.cocycle_law_defect : kInf, tol);
    } else if (spec.expect == "inequivalent") {
      const bool certified = !r.equivalent && r.failing_time.has_value();
      rec("inequivalent[" + dir + "]" + (certified ? " " + tid(*r.failing_time) : std::string()),
          "failure certificate names a grid time", certified ? 0.0 : kInf, 0.0);
    }
    return r;
  };
  certify(alpha, beta, "alpha->beta");
  if (spec.expect == "equivalent") certify(beta, alpha, "beta->alpha");
  return res;
}

SuiteResult suite_heat(const ExperimentConfig& cfg) {
  SuiteResult res{"heat", {}, {}, {}, {}};
  Recorder rec(res, res.name);
  HeatSpec spec;
  if (cfg.heat) {
    spec = *cfg.heat;
  } else {
    spec.graph = "complete(2)";
    spec.partitions = {Partition::parse("1"), Partition::parse("1/2,1/2")};
    spec.times = {0.25, 0.5, 1.0, 2.0};
    res.notes.push_back("heat: no heat section, using the two-state chain complete(2)");
  }
  const double ktol = cfg.tolerances.kernel, tol = cfg.tolerances.heat;
  const MarkovModel model = build_markov(spec);
  const KernelReport kr = kernel_report(model, spec.times);
  rec("kernel-symmetry", "heat kernel is symmetric", kr.symmetry_defect, ktol);
  rec("kernel-mass", "heat kernel has unit mass", kr.mass_defect, ktol);
  rec("kernel-nonnegative", "heat kernel is non-negative", std::max(0.0, -kr.min_entry), ktol);
  rec("kernel-chapman-kolmogorov", "Chapman-Kolmogorov", kr.chapman_kolmogorov_defect, ktol);

  auto cells = std::make_shared<CellSystem>(model.standard_form(), family_of(model.semigroup()));
  auto paths = std::make_shared<HeatPathSystem>(model);
  Rng rng = suite_rng(cfg, res.name);
  for (const auto& p : spec.partitions) {
    rec("path-marginal[" + pid(p) + "]", "path measures are consistent", marginal_defect(model, p), tol);
    const CellComparison cmp = compare_heat_cells(*cells, *paths, p);
    res.notes.push_back("heat: dim H(" + pid(p) + ") = " + std::to_string(cmp.cell_dim) + ", dim L2 path = " +
                        std::to_string(cmp.path_dim));
    rec("cells-vs-paths-dim[" + pid(p) + "]", "cells have the path space dimension",
        std::abs(static_cast<double>(cmp.cell_dim - cmp.path_dim)), 0.0);
    rec("cells-vs-paths-gram[" + pid(p) + "]", "cell words and path functions have equal Gram matrices",
        cmp.gram_defect, tol);
    rec("cells-vs-paths-iso[" + pid(p) + "]", "word map is a bimodule unitary", map_report_defect(cmp.iso, true), tol);
    std::vector<PathFunction> fs;
    for (int s = 0; s < 4; ++s) {
      PathFunction f = PathFunction::constant(model.states(), static_cast<int>(p.size()) + 1, 0.0);
      for (auto& v : f.values) v = random_matrix(rng, 1, 1)(0, 0);
      fs.push_back(f);
    }
    rec("b-adjoint[" + pid(p) + "]", "adjoint of the right embedding", b_adjoint_defect(*paths, p, fs), ktol);
    if (p.size() == 1)
      rec("refinement-compatible[" + pid(p) + "]", "refinements agree across models",
          refinement_compatibility(*cells, *paths, halve(p), p), tol);
  }
  double op = 0.0, formula = 0.0, orbit = 0.0;
  for (const auto& e : check_path_dilation(paths, spec.delta, spec.levels)) {
    op = std::max(op, e.operator_defect);
    formula = std::max(formula, e.formula_defect);
    orbit = std::max(orbit, e.orbit_defect);
  }
  const std::string grid = "delta=" + to_string(spec.delta) + " n=" + std::to_string(spec.levels);
  rec("path-dilation-operator[" + grid + "]", "compressed path dilation is multiplication by T_t f", op, tol);
  rec("path-dilation-formula[" + grid + "]", "explicit adjoint formula", formula, tol);
  rec("path-dilation-orbit[" + grid + "]", "dilation orbit is a path function", orbit, tol);

  std::ostringstream dump;
  dump << "# model states=" << model.states() << "\n";
  dump << "t,x,y,kernel,transition\n";
  for (double t : spec.times) {
    const RealMat k = model.kernel(t), tr = model.transition(t);
    for (int x = 0; x < model.states(); ++x)
      for (int y = 0; y < model.states(); ++y)
        dump << format_double(t) << ',' << x << ',' << y << ',' << format_double(k(x, y)) << ','
             << format_double(tr(x, y)) << '\n';
  }
  res.artifacts.push_back({"heat_kernel.csv", dump.str()});
  return res;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"check-cp", "cells", "refine", "roundtrip",
                                                 "dilate",   "classify", "heat"};
  return names;
}

std::vector<std::string> expand_suites(const std::vector<std::string>& requested) {
  std::set<std::string> wanted;
  for (const auto& r : requested) {
    if (r == "all") {
      wanted.insert(suite_names().begin(), suite_names().end());
    } else if (std::find(suite_names().begin(), suite_names().end(), r) != suite_names().end()) {
      wanted.insert(r);
    } else {
      throw ConfigError("unknown suite '" + r + "'");
    }
  }
  std::vector<std::string> out;
  for (const auto& n : suite_names())
    if (wanted.count(n)) out.push_back(n);
  return out;
}

SuiteResult run_suite(const std::string& name, const ExperimentConfig& config) {
  if (name == "check-cp") return suite_check_cp(config);
  if (name == "cells") return suite_cells(config);
  if (name == "refine") return suite_refine(config);
  if (name == "roundtrip") return suite_roundtrip(config);
  if (name == "dilate") return suite_dilate(config);
  if (name == "classify") return suite_classify(config);
  if (name == "heat") return suite_heat(config);
  throw ConfigError("unknown suite '" + name + "'");
}

RunOutcome run_suites(const ExperimentConfig& config, const std::vector<std::string>& suites) {
  std::vector<std::future<SuiteResult>> futures;
  for (const auto& s : suites) futures.push_back(std::async(std::launch::async, run_suite, s, std::cref(config)));
  RunOutcome out;
  out.report.header("config: " + config.source);
  out.report.header("seed: " + std::to_string(config.seed));
  out.report.header("grid: delta=" + to_string(config.delta) + " levels=" + std::to_string(config.levels) +
                    " horizon=" + to_string(config.delta * static_cast<std::int64_t>(config.levels)));
  std::string names;
  for (const auto& s : suites) names += (names.empty() ? "" : " ") + s;
  out.report.header("suites: " + names);
  for (auto& f : futures) {
    SuiteResult r = f.get();
    out.report.add(r.records);
    for (auto& n : r.notes) out.report.note(std::move(n));
    for (auto& e : r.errors) out.errors.push_back(std::move(e));
    for (auto& a : r.artifacts) out.artifacts.push_back(std::move(a));
  }
  return out;
}

}  // namespace wstar
