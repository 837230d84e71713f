// Copyright 2026 The hdoms Authors.
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

namespace hdoms {

// Base of every error thrown by the library. The CLI maps subclasses onto
// exit codes: ConfigError -> 1, IoError -> 2, everything else -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File or stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input text; carries the 1-based line number of the offence.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Data that cannot be combined: dimension mismatches, index version or
// encoding-parameter disagreement.
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

// Out-of-range input to an encoder or kernel.
class EncodingError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdoms
