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

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wstar/config.hpp"
#include "wstar/errors.hpp"
#include "wstar/report.hpp"
#include "wstar/suites.hpp"

using namespace wstar;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

CliRun run_cli(const std::string& args, const fs::path& scratch) {
  fs::create_directories(scratch);
  const fs::path out = scratch / "stdout.txt", err = scratch / "stderr.txt";
  const std::string cmd = std::string(WSTAR_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.stdout_text = slurp(out);
  r.stderr_text = slurp(err);
  return r;
}

std::string config_path(const std::string& name) { return std::string(WSTAR_CONFIG_DIR) + "/" + name; }

fs::path scratch_dir(const std::string& name) {
  return fs::temp_directory_path() / ("wstar_cli_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "t.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config errors name the offending field", "[cli]") {
  CHECK(error_of(R"({"algebra": {"blocks": []}})").find("algebra.blocks") != std::string::npos);
  CHECK(error_of(R"({"algebra": {"blocks": [2]}, "grid": {"delta": "-1/4", "levels": 2}})").find("grid.delta") !=
        std::string::npos);
  CHECK(error_of(R"({"algebra": {"blocks": [2]}, "tolerances": {"cp": 0}})").find("tolerances.cp") != std::string::npos);
  CHECK(error_of(R"({"algebra": {"blocks": [2]}, "tolerances": {"bogus": 1e-9}})").find("bogus") != std::string::npos);
  CHECK(error_of(R"({"algebra": {"blocks": [2]}, "colour": 3})").find("colour") != std::string::npos);
  CHECK(error_of(R"({"algebra": {"blocks": [2]}, "partitions": ["1/2,0"]})").find("partitions") != std::string::npos);
}

TEST_CASE("syntax errors report line and column", "[cli]") {
  const std::string msg = error_of("{\n  \"algebra\": {\"blocks\": [2]},\n  \"grid\": {\"delta\": ,}\n}");
  CHECK(msg.find("t.json") != std::string::npos);
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);
}

TEST_CASE("configs round trip through the builders", "[cli]") {
  const ExperimentConfig c = load_config(config_path("lindblad_m2.json"));
  CHECK(c.seed == 7u);
  CHECK(build_algebra(c).blocks() == std::vector<int>{2});
  CHECK(build_standard_form(c).rho().trace().real() == Catch::Approx(1.0));
  CHECK(c.classify.has_value());
  CHECK(c.heat.has_value());
  CHECK_THROWS_AS(load_config(config_path("missing.json")), ConfigError);
}

TEST_CASE("tolerance scaling multiplies every tolerance", "[cli]") {
  const Tolerances t;
  const Tolerances s = t.scaled(10.0);
  CHECK(s.cp == Catch::Approx(10.0 * t.cp));
  CHECK(s.dilation == Catch::Approx(10.0 * t.dilation));
  CHECK(s.kernel == Catch::Approx(10.0 * t.kernel));
  CHECK_THROWS_AS(t.scaled(0.0), ConfigError);
  CHECK_THROWS_AS(t.scaled(-1.0), ConfigError);
}

TEST_CASE("reports fail NaN defects and escape CSV fields", "[cli]") {
  Report r;
  r.add(make_check("s", "ok", "a", 1e-13, 1e-12));
  r.add(make_check("s", "nan", "a, quoted \"b\"", std::nan(""), 1e-12));
  r.add(make_check("s", "edge", "a", 1e-12, 1e-12));
  CHECK(r.passed() == 2);
  CHECK_FALSE(r.all_pass());
  const std::string csv = r.csv();
  CHECK(csv.rfind("suite,check_id,paper_anchor,defect,tolerance,pass\n", 0) == 0);
  CHECK(csv.find("\"a, quoted \"\"b\"\"\"") != std::string::npos);
  CHECK(r.text().find("failed: 1") != std::string::npos);
}

TEST_CASE("suite names expand canonically", "[cli]") {
  CHECK(expand_suites({"all"}) == suite_names());
  CHECK(expand_suites({"heat", "cells", "heat"}) == std::vector<std::string>{"cells", "heat"});
  CHECK_THROWS_AS(expand_suites({"nope"}), ConfigError);
}

TEST_CASE("the CLI is deterministic", "[cli][slow]") {
  const fs::path dir = scratch_dir("det");
  const std::string base = "all --config " + config_path("identity.json") + " --out ";
  const CliRun a = run_cli(base + (dir / "a").string(), dir);
  const CliRun b = run_cli(base + (dir / "b").string(), dir);
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  const std::string csv_a = slurp(dir / "a" / "report.csv");
  CHECK_FALSE(csv_a.empty());
  CHECK(csv_a == slurp(dir / "b" / "report.csv"));
  CHECK(fs::exists(dir / "a" / "report.txt"));
  CHECK(a.stdout_text.find("failed: 0") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("the CLI exits nonzero past the horizon", "[cli][slow]") {
  const fs::path dir = scratch_dir("trunc");
  const CliRun r = run_cli("dilate --config " + config_path("truncation.json") + " --out " + (dir / "o").string(), dir);
  CHECK(r.exit_code == 1);
  CHECK(r.stderr_text.find("max admissible t = 1") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("the CLI rejects bad invocations", "[cli][slow]") {
  const fs::path dir = scratch_dir("bad");
  CHECK(run_cli("frobnicate --config " + config_path("identity.json"), dir).exit_code != 0);
  const fs::path cfg = dir / "broken.json";
  std::ofstream(cfg) << "{\"algebra\": {\"blocks\": [2]}, \"grid\": {\"levels\": 0}}";
  const CliRun r = run_cli("cells --config " + cfg.string() + " --out " + (dir / "o").string(), dir);
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("grid.levels") != std::string::npos);
  fs::remove_all(dir);
}
