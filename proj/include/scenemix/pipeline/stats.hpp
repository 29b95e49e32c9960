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

#include <string_view>

#include "json.hpp"

namespace scenemix::pipeline {

inline constexpr int kHistogramBins = 10;

/**
 * Aggregates a manifest into a report with sample, point, skip and warning
 * counts plus a histogram for every numeric draw, keyed "<op>.<name>".
 * Malformed lines throw LineError(kStatsError).
 */
nlohmann::json stats(std::string_view manifest);

}  // namespace scenemix::pipeline
