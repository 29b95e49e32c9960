// Copyright 2026 The SceneMix Authors.
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
#include <string_view>

namespace scenemix {

enum class ErrorCode {
  kEmptyCloud,
  kAttributeMismatch,
  kMissingAttribute,
  kInvalidArgument,
  kTruncated,
  kUnsupportedEncoding,
  kMissingProperty,
  kCountMismatch,
  kParseError,
  kEmptyBatch,
  kPlacementInfeasible,
  kInconsistentInstance,
  kEmptyInstanceSet,
  kEmptyCrop,
  kConfigError,
  kStatsError,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported as an Error carrying a code that
/// callers (and tests) can branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failures in line-oriented inputs keep the 1-based line number.
class LineError : public Error {
 public:
  LineError(ErrorCode code, std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Config validation failures keep the dotted path of the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message);

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace scenemix
