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

#include "wstar/partition.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "wstar/errors.hpp"

namespace wstar {

Partition::Partition(std::vector<Rational> parts) : parts_(std::move(parts)) {
  for (const auto& p : parts_)
    if (p <= Rational(0)) throw DomainError("partition parts must be positive");
}

Partition Partition::parse(const std::string& text) {
  std::vector<Rational> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    parts.push_back(parse_rational(item));
  }
  return Partition(std::move(parts));
}

Partition Partition::uniform(const Rational& delta, int k) {
  if (k < 0) throw DomainError("negative number of parts");
  return Partition(std::vector<Rational>(static_cast<std::size_t>(k), delta));
}

Rational Partition::total() const {
  Rational s(0);
  for (const auto& p : parts_) s += p;
  return s;
}

std::vector<Rational> Partition::cut_points() const {
  std::vector<Rational> cuts;
  Rational s(0);
  for (std::size_t i = 0; i + 1 < parts_.size(); ++i) {
    s += parts_[i];
    cuts.push_back(s);
  }
  return cuts;
}

Partition Partition::prefix(std::size_t n) const {
  return Partition(std::vector<Rational>(parts_.begin(), parts_.begin() + static_cast<long>(n)));
}

Partition Partition::suffix_from(std::size_t n) const {
  return Partition(std::vector<Rational>(parts_.begin() + static_cast<long>(n), parts_.end()));
}

std::string Partition::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ",";
    s += to_string(parts_[i]);
  }
  return s + ")";
}

bool Partition::operator<(const Partition& o) const {
  return std::lexicographical_compare(parts_.begin(), parts_.end(), o.parts_.begin(), o.parts_.end());
}

Partition join(const Partition& p, const Partition& q) {
  std::vector<Rational> parts = p.parts();
  parts.insert(parts.end(), q.parts().begin(), q.parts().end());
  return Partition(std::move(parts));
}

bool refines(const Partition& p, const Partition& q) {
  if (p.total() != q.total()) throw DomainError("partitions " + p.str() + " and " + q.str() + " have different totals");
  const auto fine = p.cut_points();
  const std::set<Rational> have(fine.begin(), fine.end());
  for (const auto& c : q.cut_points())
    if (!have.count(c)) return false;
  return true;
}

Partition common_refinement(const Partition& p, const Partition& q) {
  if (p.total() != q.total()) throw DomainError("partitions " + p.str() + " and " + q.str() + " have different totals");
  std::set<Rational> cuts;
  for (const auto& c : p.cut_points()) cuts.insert(c);
  for (const auto& c : q.cut_points()) cuts.insert(c);
  std::vector<Rational> parts;
  Rational last(0);
  for (const auto& c : cuts) {
    parts.push_back(c - last);
    last = c;
  }
  if (p.total() > Rational(0)) parts.push_back(p.total() - last);
  return Partition(std::move(parts));
}

std::vector<Partition> refinement_groups(const Partition& p, const Partition& q) {
  if (!refines(p, q)) throw OrderError(p.str() + " does not refine " + q.str());
  std::vector<Partition> groups;
  std::size_t at = 0;
  for (const auto& part : q.parts()) {
    std::vector<Rational> group;
    Rational s(0);
    while (s < part) {
      s += p[at];
      group.push_back(p[at]);
      ++at;
    }
    groups.emplace_back(std::move(group));
  }
  return groups;
}

}  // namespace wstar
