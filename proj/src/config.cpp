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


#include "wstar/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wstar {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError("field '" + field + "': " + message);
}

const json* member(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double read_double(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

int read_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

std::string read_string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

Rational read_rational(const json& j, const std::string& field) {
  std::string text;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else if (j.is_number()) {
    text = j.dump();
  } else {
    fail(field, "expected a rational such as \"1/4\"");
  }
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    fail(field, std::string("cannot parse rational: ") + e.what());
  }
}

std::vector<double> read_doubles(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_double(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

cplx read_entry(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(field, "expected a [re, im] pair");
}

Mat read_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of rows");
  const int rows = static_cast<int>(j.size());
  int cols = -1;
  for (int r = 0; r < rows; ++r) {
    const std::string rf = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) fail(rf, "expected a row array");
    if (cols < 0) cols = static_cast<int>(j[r].size());
    if (static_cast<int>(j[r].size()) != cols || cols == 0) fail(rf, "rows must have equal non-zero length");
  }
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      m(r, c) = read_entry(j[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  return m;
}

RealMat read_real_matrix(const json& j, const std::string& field) {
  Mat m = read_matrix(j, field);
  if (m.imag().cwiseAbs().maxCoeff() > 0.0) fail(field, "expected real entries");
  return m.real();
}

Partition read_partition(const json& j, const std::string& field) {
  try {
    if (j.is_string()) return Partition::parse(j.get<std::string>());
    if (j.is_array()) {
      std::vector<Rational> parts;
      for (std::size_t i = 0; i < j.size(); ++i) parts.push_back(read_rational(j[i], field + "[" + std::to_string(i) + "]"));
      return Partition(parts);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(field, e.what());
  }
  fail(field, "expected a partition such as \"1/4,1/4,1/2\"");
}

std::vector<Partition> read_partitions(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of partitions");
  std::vector<Partition> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    Partition p = read_partition(j[i], f);
    if (p.empty()) fail(f, "partitions must be non-empty");
    out.push_back(p);
  }
  return out;
}

void read_grid(const json& j, const std::string& field, Rational& delta, int& levels) {
  if (!j.is_object()) fail(field, "expected an object with delta and levels");
  if (auto* d = member(j, "delta")) delta = read_rational(*d, field + ".delta");
  if (auto* n = member(j, "levels")) levels = read_int(*n, field + ".levels");
  if (delta <= Rational(0)) fail(field + ".delta", "must be positive");
  if (levels < 1) fail(field + ".levels", "must be at least 1");
}

E0Spec read_e0(const json& j, const std::string& field) {
  if (!j.is_object() || j.size() != 1) fail(field, "expected an object with exactly one of identity, inner, stepped, cocycle_perturbation, broken");
  E0Spec spec;
  const std::string key = j.begin().key();
  const json& value = j.begin().value();
  spec.kind = key;
  const std::string f = field + "." + key;
  if (key == "identity") {
  } else if (key == "inner") {
    spec.matrix = read_matrix(value, f);
  } else if (key == "stepped") {
    if (!value.is_object()) fail(f, "expected an object with delta and unitary");
    const json* d = member(value, "delta");
    const json* v = member(value, "unitary");
    if (!d || !v) fail(f, "requires delta and unitary");
    spec.delta = read_rational(*d, f + ".delta");
    if (spec.delta <= Rational(0)) fail(f + ".delta", "must be positive");
    spec.matrix = read_matrix(*v, f + ".unitary");
  } else if (key == "cocycle_perturbation") {
    if (!value.is_object() || !member(value, "hermitian")) fail(f, "requires hermitian");
    const json& h = value["hermitian"];
    if (!(h.is_string() && h.get<std::string>() == "random")) spec.matrix = read_matrix(h, f + ".hermitian");
  } else if (key == "broken") {
    if (!value.is_object() || !member(value, "from") || !member(value, "unitary")) fail(f, "requires from and unitary");
    spec.from = read_rational(value["from"], f + ".from");
    spec.matrix = read_matrix(value["unitary"], f + ".unitary");
  } else {
    fail(field, "unknown kind '" + key + "'");
  }
  return spec;
}

SemigroupSpec read_semigroup(const json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  SemigroupSpec spec;
  if (auto* g = member(j, "generator")) {
    spec.kind = "generator";
    spec.generator = read_matrix(*g, field + ".generator");
    return spec;
  }
  const json* b = member(j, "builtin");
  if (!b) fail(field, "requires builtin or generator");
  spec.kind = read_string(*b, field + ".builtin");
  if (spec.kind == "lindblad") {
    if (auto* jumps = member(j, "jumps")) {
      if (!jumps->is_array()) fail(field + ".jumps", "expected an array of matrices");
      for (std::size_t i = 0; i < jumps->size(); ++i)
        spec.jumps.push_back(read_matrix((*jumps)[i], field + ".jumps[" + std::to_string(i) + "]"));
    }
    if (auto* h = member(j, "hamiltonian")) spec.hamiltonian = read_matrix(*h, field + ".hamiltonian");
  } else if (spec.kind == "unitary_conjugation") {
    const json* h = member(j, "hamiltonian");
    if (!h) fail(field, "unitary_conjugation requires hamiltonian");
    spec.hamiltonian = read_matrix(*h, field + ".hamiltonian");
  } else if (spec.kind != "stochastic_pair" && spec.kind != "identity") {
    fail(field + ".builtin", "unknown semigroup '" + spec.kind + "'");
  }
  return spec;
}

HeatSpec read_heat(const json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  HeatSpec spec;
  if (auto* g = member(j, "graph")) spec.graph = read_string(*g, field + ".graph");
  if (auto* mu = member(j, "mu")) spec.mu = read_doubles(*mu, field + ".mu");
  if (auto* l = member(j, "laplacian")) spec.laplacian = read_real_matrix(*l, field + ".laplacian");
  if (spec.graph.empty() && (spec.mu.empty() || spec.laplacian.size() == 0))
    fail(field, "requires graph or both mu and laplacian");
  spec.partitions = {Partition::parse("1"), Partition::parse("1/2,1/2")};
  if (auto* p = member(j, "partitions")) spec.partitions = read_partitions(*p, field + ".partitions");
  if (auto* g = member(j, "grid")) read_grid(*g, field + ".grid", spec.delta, spec.levels);
  spec.times = {0.25, 0.5, 1.0, 2.0};
  if (auto* t = member(j, "times")) spec.times = read_doubles(*t, field + ".times");
  for (std::size_t i = 0; i < spec.times.size(); ++i)
    if (!(spec.times[i] > 0.0)) fail(field + ".times[" + std::to_string(i) + "]", "must be positive");
  return spec;
}

void read_tolerances(const json& j, Tolerances& tol) {
  if (!j.is_object()) fail("tolerances", "expected an object");
  const std::pair<const char*, double*> fields[] = {
      {"cp", &tol.cp},           {"cells", &tol.cells},         {"refine", &tol.refine},
      {"roundtrip", &tol.roundtrip}, {"dilation", &tol.dilation}, {"classify", &tol.classify},
      {"kernel", &tol.kernel},   {"heat", &tol.heat},           {"rank_cutoff", &tol.rank_cutoff}};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, target] : fields) {
      if (key != name) continue;
      known = true;
      *target = read_double(value, "tolerances." + key);
      if (!(*target > 0.0)) fail("tolerances." + key, "must be positive");
    }
    if (!known) fail("tolerances." + key, "unknown tolerance");
  }
}

std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Tolerances Tolerances::scaled(double factor) const {
  if (!(factor > 0.0)) throw ConfigError("tolerance scale must be positive");
  Tolerances t = *this;
  for (double* v : {&t.cp, &t.cells, &t.refine, &t.roundtrip, &t.dilation, &t.classify, &t.kernel, &t.heat}) *v *= factor;
  return t;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": syntax error at " + position_of(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                      e.what());
  }
  if (!root.is_object()) throw ConfigError(source + ": top level must be an object");

  static const std::vector<std::string> known = {"algebra", "state", "semigroup", "partitions", "grid",
                                                 "probe_times", "refine", "random_samples", "suites", "seed",
                                                 "tolerances", "classify", "heat", "output_dir"};
  ExperimentConfig cfg;
  cfg.source = source;
  try {
    for (const auto& [key, value] : root.items())
      if (std::find(known.begin(), known.end(), key) == known.end()) fail(key, "unknown field");

    if (auto* a = member(root, "algebra")) {
      if (!a->is_object() || !member(*a, "blocks")) fail("algebra", "expected an object with blocks");
      const json& blocks = (*a)["blocks"];
      if (!blocks.is_array() || blocks.empty()) fail("algebra.blocks", "expected a non-empty array");
      cfg.blocks.clear();
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string f = "algebra.blocks[" + std::to_string(i) + "]";
        int n = read_int(blocks[i], f);
        if (n < 1) fail(f, "block sizes must be positive");
        cfg.blocks.push_back(n);
      }
    }
    if (auto* s = member(root, "state")) {
      if (s->is_string() && s->get<std::string>() == "tracial") {
        cfg.state_kind = "tracial";
      } else if (s->is_object() && member(*s, "diagonal")) {
        cfg.state_kind = "diagonal";
        cfg.diagonal = read_doubles((*s)["diagonal"], "state.diagonal");
      } else if (s->is_object() && member(*s, "density")) {
        cfg.state_kind = "density";
        cfg.density = read_matrix((*s)["density"], "state.density");
      } else {
        fail("state", "expected \"tracial\", {\"diagonal\": [...]} or {\"density\": [...]}");
      }
    }
    if (auto* s = member(root, "semigroup")) cfg.semigroup = read_semigroup(*s, "semigroup");
    if (auto* p = member(root, "partitions")) cfg.partitions = read_partitions(*p, "partitions");
    if (auto* g = member(root, "grid")) read_grid(*g, "grid", cfg.delta, cfg.levels);
    if (auto* t = member(root, "probe_times")) {
      if (!t->is_array()) fail("probe_times", "expected an array");
      for (std::size_t i = 0; i < t->size(); ++i)
        cfg.probe_times.push_back(read_rational((*t)[i], "probe_times[" + std::to_string(i) + "]"));
    }
    if (auto* r = member(root, "refine")) {
      if (!r->is_object()) fail("refine", "expected an object with depth and optional partitions");
      if (auto* d = member(*r, "depth")) cfg.refine_depth = read_int(*d, "refine.depth");
      if (cfg.refine_depth < 0) fail("refine.depth", "must be non-negative");
      if (auto* p = member(*r, "partitions")) cfg.refine_partitions = read_partitions(*p, "refine.partitions");
    }
    if (auto* r = member(root, "random_samples")) {
      cfg.random_samples = read_int(*r, "random_samples");
      if (cfg.random_samples < 1) fail("random_samples", "must be positive");
    }
    if (auto* s = member(root, "suites")) {
      if (!s->is_array()) fail("suites", "expected an array of suite names");
      for (std::size_t i = 0; i < s->size(); ++i) cfg.suites.push_back(read_string((*s)[i], "suites[" + std::to_string(i) + "]"));
    }
    if (auto* s = member(root, "seed")) {
      if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0))
        fail("seed", "expected a non-negative integer");
      cfg.seed = s->get<std::uint64_t>();
    }
    if (auto* t = member(root, "tolerances")) read_tolerances(*t, cfg.tolerances);
    if (auto* c = member(root, "classify")) {
      if (!c->is_object() || !member(*c, "alpha") || !member(*c, "beta")) fail("classify", "requires alpha and beta");
      ClassifySpec spec;
      spec.alpha = read_e0((*c)["alpha"], "classify.alpha");
      spec.beta = read_e0((*c)["beta"], "classify.beta");
      if (spec.alpha.kind == "cocycle_perturbation" || spec.alpha.kind == "broken")
        fail("classify.alpha", "must be identity, inner or stepped");
      if (auto* e = member(*c, "expect")) {
        spec.expect = read_string(*e, "classify.expect");
        if (spec.expect != "equivalent" && spec.expect != "inequivalent")
          fail("classify.expect", "expected \"equivalent\" or \"inequivalent\"");
      }
      cfg.classify = spec;
    }
    if (auto* h = member(root, "heat")) cfg.heat = read_heat(*h, "heat");
    if (auto* o = member(root, "output_dir")) cfg.output_dir = read_string(*o, "output_dir");
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

Algebra build_algebra(const ExperimentConfig& config) { return Algebra(config.blocks); }

StandardForm build_standard_form(const ExperimentConfig& config) {
  Algebra algebra = build_algebra(config);
  if (config.state_kind == "diagonal") {
    if (static_cast<int>(config.diagonal.size()) != algebra.size())
      fail("state.diagonal", "expected " + std::to_string(algebra.size()) + " entries");
    for (double d : config.diagonal)
      if (!(d > 0.0)) fail("state.diagonal", "entries must be positive");
    return StandardForm(algebra, State::diagonal(algebra, config.diagonal));
  }
  if (config.state_kind == "density") {
    if (config.density.rows() != algebra.size() || config.density.cols() != algebra.size())
      fail("state.density", "expected a " + std::to_string(algebra.size()) + "x" + std::to_string(algebra.size()) +
                                " matrix");
    if (!algebra.is_element(config.density, 1e-12)) fail("state.density", "must be block diagonal");
    return StandardForm(algebra, State(algebra, config.density));
  }
  return StandardForm(algebra, State::tracial(algebra));
}

CpSemigroup build_semigroup(const ExperimentConfig& config) {
  Algebra algebra = build_algebra(config);
  const SemigroupSpec& s = config.semigroup;
  auto check_square = [&](const Mat& m, const std::string& field) {
    if (m.rows() != algebra.size() || m.cols() != algebra.size())
      fail(field, "expected a " + std::to_string(algebra.size()) + "x" + std::to_string(algebra.size()) + " matrix");
    if (!algebra.is_element(m, 1e-12)) fail(field, "must lie in the algebra");
  };
  if (s.kind == "stochastic_pair") {
    if (config.blocks != std::vector<int>{1, 1}) fail("semigroup.builtin", "stochastic_pair requires blocks [1, 1]");
    return CpSemigroup(algebra, stochastic_pair_generator());
  }
  if (s.kind == "identity") return CpSemigroup(algebra, Mat::Zero(algebra.dim(), algebra.dim()));
  if (s.kind == "lindblad") {
    for (std::size_t i = 0; i < s.jumps.size(); ++i) check_square(s.jumps[i], "semigroup.jumps[" + std::to_string(i) + "]");
    if (s.hamiltonian.size() > 0) check_square(s.hamiltonian, "semigroup.hamiltonian");
    return CpSemigroup(algebra, lindblad_generator(algebra, s.jumps, s.hamiltonian));
  }
  if (s.kind == "unitary_conjugation") {
    check_square(s.hamiltonian, "semigroup.hamiltonian");
    return CpSemigroup(algebra, unitary_conjugation_generator(algebra, s.hamiltonian));
  }
  if (s.generator.rows() != algebra.dim() || s.generator.cols() != algebra.dim())
    fail("semigroup.generator", "expected a " + std::to_string(algebra.dim()) + "x" + std::to_string(algebra.dim()) +
                                    " coordinate matrix");
  try {
    return CpSemigroup(algebra, s.generator);
  } catch (const NonUnitalGeneratorError& e) {
    fail("semigroup.generator", e.what());
  }
}

E0Semigroup build_e0(const Algebra& algebra, const E0Spec& spec, const E0Semigroup* base, std::uint64_t seed) {
  auto check = [&](const Mat& m) {
    if (m.rows() != algebra.size() || m.cols() != algebra.size())
      throw ConfigError("classify: expected " + std::to_string(algebra.size()) + "x" + std::to_string(algebra.size()) +
                        " matrices");
  };
  if (spec.kind == "identity") return E0Semigroup::identity(algebra);
  if (spec.kind == "inner") {
    check(spec.matrix);
    return E0Semigroup::inner(algebra, spec.matrix);
  }
  if (spec.kind == "stepped") {
    check(spec.matrix);
    return E0Semigroup::stepped(algebra, spec.delta, spec.matrix);
  }
  if (!base) throw ConfigError("classify: '" + spec.kind + "' needs a base semigroup");
  Mat m = spec.matrix;
  if (m.size() == 0) {
    Rng rng(seed);
    const Mat x = algebra.random_element(rng);
    m = (x + x.adjoint()) / 2.0;
  }
  check(m);
  const E0Semigroup alpha = *base;
  if (spec.kind == "cocycle_perturbation") {
    return E0Semigroup::implemented(
        algebra,
        [alpha, m](const Rational& t) {
          const Mat u = alpha.unitary(t);
          const Mat w = u.adjoint() * expm(cplx(0.0, to_double(t)) * m);
          return Mat(u * w);
        },
        "cocycle perturbation of " + alpha.label());
  }
  const Rational from = spec.from;
  return E0Semigroup::implemented(
      algebra,
      [alpha, m, from](const Rational& t) { return t < from ? alpha.unitary(t) : Mat(alpha.unitary(t) * m); },
      "broken copy of " + alpha.label());
}

MarkovModel build_markov(const HeatSpec& spec) {
  try {
    if (!spec.graph.empty()) return MarkovModel::named(spec.graph);
    RealVec mu = Eigen::Map<const RealVec>(spec.mu.data(), static_cast<Eigen::Index>(spec.mu.size()));
    return MarkovModel(mu, spec.laplacian);
  } catch (const DomainError& e) {
    fail("heat", e.what());
  }
}

}  // namespace wstar
