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

namespace wstar {

struct CheckRecord {
  std::string suite;
  std::string check_id;
  std::string anchor;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/** A file produced by a suite next to the report, e.g. a residual table. */
struct Artifact {
  std::string filename;
  std::string contents;
};

/** pass is defect <= tolerance; NaN defects fail. */
CheckRecord make_check(std::string suite, std::string check_id, std::string anchor, double defect, double tolerance);

class Report {
 public:
  void add(CheckRecord record) { records_.push_back(std::move(record)); }
  void add(const std::vector<CheckRecord>& records);
  void note(std::string line) { notes_.push_back(std::move(line)); }
  void header(std::string line) { header_.push_back(std::move(line)); }

  const std::vector<CheckRecord>& records() const { return records_; }
  const std::vector<std::string>& notes() const { return notes_; }
  std::size_t passed() const;
  std::size_t failed() const { return records_.size() - passed(); }
  bool all_pass() const { return failed() == 0; }

  /** suite,check_id,paper_anchor,defect,tolerance,pass */
  std::string csv() const;
  /** Header lines, an aligned table, notes and summary counts. */
  std::string text() const;

 private:
  std::vector<std::string> header_;
  std::vector<CheckRecord> records_;
  std::vector<std::string> notes_;
};

std::string format_double(double v);
std::string csv_escape(const std::string& field);

}  // namespace wstar
