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

#include "wstar/rational.hpp"

namespace wstar {

/** An ordered tuple of positive rationals; the empty tuple has total zero. */
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<Rational> parts);
  /** Parses "1/4,1/4,1/2"; the empty string gives (). */
  static Partition parse(const std::string& text);
  /** k copies of delta. */
  static Partition uniform(const Rational& delta, int k);

  const std::vector<Rational>& parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  const Rational& operator[](std::size_t i) const { return parts_[i]; }
  Rational total() const;
  /** Cumulative sums strictly inside (0, total). */
  std::vector<Rational> cut_points() const;

  Partition prefix(std::size_t n) const;
  Partition suffix_from(std::size_t n) const;

  std::string str() const;
  bool operator==(const Partition& o) const { return parts_ == o.parts_; }
  bool operator!=(const Partition& o) const { return !(*this == o); }
  bool operator<(const Partition& o) const;

 private:
  std::vector<Rational> parts_;
};

/** Concatenation p v q. */
Partition join(const Partition& p, const Partition& q);
/** True iff the parts of p group consecutively into the parts of q. Throws DomainError on different totals. */
bool refines(const Partition& p, const Partition& q);
Partition common_refinement(const Partition& p, const Partition& q);
/**
 * For p refining q: the sub-partitions q(s_i) of p lying over each part of q.
 * Throws OrderError if p does not refine q.
 */
std::vector<Partition> refinement_groups(const Partition& p, const Partition& q);

}  // namespace wstar
