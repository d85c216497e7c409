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

#include "wstar/rational.hpp"

#include <cctype>

#include "wstar/errors.hpp"

namespace wstar {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::int64_t parse_integer(const std::string& s, const std::string& full) {
  if (s.empty()) throw DomainError("malformed rational '" + full + "'");
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw DomainError("malformed rational '" + full + "'");
  }
  if (pos != s.size()) throw DomainError("malformed rational '" + full + "'");
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const std::string s = trim(text);
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const auto num = parse_integer(trim(s.substr(0, slash)), text);
    const auto den = parse_integer(trim(s.substr(slash + 1)), text);
    if (den == 0) throw DomainError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    const std::string whole = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    if (frac.size() > 15) throw DomainError("too many decimals in '" + text + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::int64_t w =
        (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_integer(whole, text);
    const std::int64_t f = frac.empty() ? 0 : parse_integer(frac, text);
    if (f < 0) throw DomainError("malformed rational '" + text + "'");
    const std::int64_t mag = (w < 0 ? -w : w) * den + f;
    return Rational(negative ? -mag : mag, den);
  }
  return Rational(parse_integer(s, text));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

}  // namespace wstar
