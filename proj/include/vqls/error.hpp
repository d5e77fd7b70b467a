// Copyright 2026 The vqls-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace vqls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments, malformed configuration or inconsistent sizes.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Singular systems, non-finite values, failed convergence.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Requests that exceed a configured size limit.
class ResourceError : public Error {
  public:
    using Error::Error;
};

/// Malformed input files. The message carries the offending line number.
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace vqls
