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

#include "scenemix/error.hpp"

namespace scenemix {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyCloud: return "EmptyCloud";
    case ErrorCode::kAttributeMismatch: return "AttributeMismatch";
    case ErrorCode::kMissingAttribute: return "MissingAttribute";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kMissingProperty: return "MissingProperty";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kPlacementInfeasible: return "PlacementInfeasible";
    case ErrorCode::kInconsistentInstance: return "InconsistentInstance";
    case ErrorCode::kEmptyInstanceSet: return "EmptyInstanceSet";
    case ErrorCode::kEmptyCrop: return "EmptyCrop";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kStatsError: return "StatsError";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

LineError::LineError(ErrorCode code, std::size_t line, const std::string& message)
    : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

ConfigError::ConfigError(std::string path, const std::string& message)
    : Error(ErrorCode::kConfigError, path + ": " + message), path_(std::move(path)) {}

}  // namespace scenemix
