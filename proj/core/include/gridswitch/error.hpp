// Copyright 2026 The gridswitch Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridswitch {

/// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }
  /// Same error with the message prefixed by `source` (a file name).
  ParseError in(const std::string& source) const { return ParseError(source + ": " + what(), line_, 0); }

 private:
  ParseError(const std::string& full, std::size_t line, int) : Error(full), line_(line) {}
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or a numerically broken computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Kron reduction hit a (near) singular interior block.
class ReductionError : public Error {
 public:
  using Error::Error;
};

}  // namespace gridswitch
