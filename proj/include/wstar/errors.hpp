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

#include <stdexcept>
#include <string>

namespace wstar {

/** Base class of every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FaithfulnessError : public Error {
 public:
  using Error::Error;
};

class NonUnitalGeneratorError : public Error {
 public:
  using Error::Error;
};

class NonCpError : public Error {
 public:
  using Error::Error;
};

/** Raised when internally constructed data violates an identity it must satisfy. */
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/** Raised when a partition is asked to refine one it does not refine. */
class OrderError : public Error {
 public:
  using Error::Error;
};

/** Raised when a request leaves the window covered by a truncated limit. */
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::string max_admissible)
      : Error(what), max_admissible_(std::move(max_admissible)) {}
  const std::string& max_admissible() const { return max_admissible_; }

 private:
  std::string max_admissible_;
};

}  // namespace wstar
