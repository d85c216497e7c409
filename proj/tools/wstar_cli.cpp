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


#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "wstar/suites.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw wstar::Error("cannot write " + path.string());
  out << contents;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional verification suites for CP semigroups, product systems and dilations"};
  std::string verb;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  double tol_scale = 1.0;

  std::vector<std::string> verbs = wstar::suite_names();
  verbs.push_back("all");
  app.add_option("verb", verb, "Suite to run")->required()->check(CLI::IsMember(verbs));
  app.add_option("--config", config_path, "Experiment configuration (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory (defaults to the config's output_dir)");
  app.add_option("--seed", seed, "Override the random seed");
  app.add_option("--tol-scale", tol_scale, "Multiply every tolerance by this factor")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    wstar::ExperimentConfig config = wstar::load_config(config_path);
    if (seed) config.seed = *seed;
    config.tolerances = config.tolerances.scaled(tol_scale);
    if (!out_dir.empty()) config.output_dir = out_dir;

    const auto suites = wstar::expand_suites({verb});
    const wstar::RunOutcome outcome = wstar::run_suites(config, suites);

    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "report.csv", outcome.report.csv());
    write_file(dir / "report.txt", outcome.report.text());
    for (const auto& a : outcome.artifacts) write_file(dir / a.filename, a.contents);

    std::cout << outcome.report.text();
    for (const auto& e : outcome.errors) std::cerr << "error: " << e << '\n';
    return outcome.report.all_pass() ? 0 : 1;
  } catch (const wstar::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
