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


#include "wstar/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wstar {

CheckRecord make_check(std::string suite, std::string check_id, std::string anchor, double defect, double tolerance) {
  CheckRecord r{std::move(suite), std::move(check_id), std::move(anchor), defect, tolerance, false};
  r.pass = !std::isnan(defect) && defect <= tolerance;
  return r;
}

void Report::add(const std::vector<CheckRecord>& records) {
  records_.insert(records_.end(), records.begin(), records.end());
}

std::size_t Report::passed() const {
  return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](const auto& r) { return r.pass; }));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Report::csv() const {
  std::ostringstream out;
  out << "suite,check_id,paper_anchor,defect,tolerance,pass\n";
  for (const auto& r : records_)
    out << csv_escape(r.suite) << ',' << csv_escape(r.check_id) << ',' << csv_escape(r.anchor) << ','
        << format_double(r.defect) << ',' << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
  return out.str();
}

std::string Report::text() const {
  std::ostringstream out;
  for (const auto& h : header_) out << "# " << h << '\n';
  std::size_t w_suite = 5, w_id = 8, w_anchor = 6;
  for (const auto& r : records_) {
    w_suite = std::max(w_suite, r.suite.size());
    w_id = std::max(w_id, r.check_id.size());
    w_anchor = std::max(w_anchor, r.anchor.size());
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); };
  out << pad("suite", w_suite) << "  " << pad("check_id", w_id) << "  " << pad("anchor", w_anchor) << "  "
      << pad("defect", 13) << "  " << pad("tolerance", 13) << "  result\n";
  for (const auto& r : records_)
    out << pad(r.suite, w_suite) << "  " << pad(r.check_id, w_id) << "  " << pad(r.anchor, w_anchor) << "  "
        << pad(format_double(r.defect), 13) << "  " << pad(format_double(r.tolerance), 13) << "  "
        << (r.pass ? "PASS" : "FAIL") << '\n';
  if (!notes_.empty()) {
    out << '\n';
    for (const auto& n : notes_) out << n << '\n';
  }
  out << "\nchecks: " << records_.size() << "  passed: " << passed() << "  failed: " << failed() << '\n';
  return out.str();
}

}  // namespace wstar
