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

#include <string>
#include <vector>

#include "wstar/config.hpp"
#include "wstar/report.hpp"

namespace wstar {

struct SuiteResult {
  std::string name;
  std::vector<CheckRecord> records;
  std::vector<std::string> notes;
  /** Problems worth surfacing on stderr, such as truncation errors. */
  std::vector<std::string> errors;
  std::vector<Artifact> artifacts;
};

/** check-cp, cells, refine, roundtrip, dilate, classify, heat. */
const std::vector<std::string>& suite_names();
/** Expands "all" and validates names; throws ConfigError on unknown suites. */
std::vector<std::string> expand_suites(const std::vector<std::string>& requested);

SuiteResult run_suite(const std::string& name, const ExperimentConfig& config);

struct RunOutcome {
  Report report;
  std::vector<Artifact> artifacts;
  std::vector<std::string> errors;
};

/** Runs the suites concurrently and assembles their results in the canonical order. */
RunOutcome run_suites(const ExperimentConfig& config, const std::vector<std::string>& suites);

}  // namespace wstar
