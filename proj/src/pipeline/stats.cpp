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

#include "scenemix/pipeline/stats.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "scenemix/error.hpp"

namespace scenemix::pipeline {

using nlohmann::json;

namespace {

void collect(std::map<std::string, std::vector<double>>& values, const std::string& key, const json& v) {
  if (v.is_number()) {
    values[key].push_back(v.get<double>());
  } else if (v.is_boolean()) {
    values[key].push_back(v.get<bool>() ? 1.0 : 0.0);
  }
}

json histogram(const std::vector<double>& values) {
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  double sum = 0.0;
  std::vector<std::size_t> bins(kHistogramBins, 0);
  for (double v : values) {
    sum += v;
    auto b = hi > lo ? static_cast<std::size_t>((v - lo) / (hi - lo) * kHistogramBins) : 0;
    ++bins[std::min<std::size_t>(b, kHistogramBins - 1)];
  }
  return {{"count", values.size()},
          {"min", lo},
          {"max", hi},
          {"mean", sum / static_cast<double>(values.size())},
          {"bins", bins}};
}

std::size_t count_field(const json& record, const char* key, std::size_t line) {
  const auto it = record.find(key);
  if (it == record.end() || !it->is_number_unsigned()) {
    throw LineError(ErrorCode::kStatsError, line, std::string("missing or invalid '") + key + "'");
  }
  return it->get<std::size_t>();
}

}  // namespace

json stats(std::string_view manifest) {
  std::size_t samples = 0;
  std::size_t total_points = 0;
  std::size_t supervised_points = 0;
  std::size_t skipped = 0;
  std::size_t budget_dropped = 0;
  std::size_t warnings = 0;
  std::size_t unmixed = 0;
  std::map<std::string, std::vector<double>> values;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < manifest.size()) {
    const std::size_t end = std::min(manifest.find('\n', pos), manifest.size());
    const std::string_view line = manifest.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw LineError(ErrorCode::kStatsError, line_no, "not valid JSON");
    }
    if (!record.is_object() || !record.contains("type") || !record["type"].is_string()) {
      throw LineError(ErrorCode::kStatsError, line_no, "record without a type");
    }
    const std::string type = record["type"].get<std::string>();
    if (type == "sample") {
      ++samples;
      total_points += count_field(record, "points", line_no);
      supervised_points += count_field(record, "supervised_points", line_no);
      if (record.value("unmixed", false)) ++unmixed;
      if (!record.value("warning", std::string()).empty()) ++warnings;
      if (!record.contains("sources") || !record["sources"].is_array()) {
        throw LineError(ErrorCode::kStatsError, line_no, "sample without sources");
      }
      for (const json& source : record["sources"]) {
        if (!source.is_object() || !source.contains("steps") || !source["steps"].is_array()) {
          throw LineError(ErrorCode::kStatsError, line_no, "source without steps");
        }
        for (const json& step : source["steps"]) {
          if (!step.is_object() || !step.contains("op") || !step["op"].is_string()) {
            throw LineError(ErrorCode::kStatsError, line_no, "step without op");
          }
          const std::string op = step["op"].get<std::string>();
          if (!step.contains("draws")) continue;
          for (const auto& [name, v] : step["draws"].items()) collect(values, op + "." + name, v);
        }
      }
      if (record.contains("mix") && record["mix"].is_object()) {
        for (const char* key : {"direction", "gap"}) {
          if (record["mix"].contains(key)) collect(values, std::string("mix.") + key, record["mix"][key]);
        }
      }
    } else if (type == "skip") {
      ++skipped;
    } else if (type == "budget_drop") {
      const auto it = record.find("scene_ids");
      if (it == record.end() || !it->is_array()) throw LineError(ErrorCode::kStatsError, line_no, "budget_drop without scene_ids");
      budget_dropped += it->size();
    } else if (type != "epoch") {
      throw LineError(ErrorCode::kStatsError, line_no, "unknown record type '" + type + "'");
    }
  }

  json histograms = json::object();
  for (const auto& [key, vs] : values) histograms[key] = histogram(vs);
  return {{"samples", samples},
          {"total_points", total_points},
          {"supervised_points", supervised_points},
          {"unmixed_samples", unmixed},
          {"skipped_scenes", skipped},
          {"budget_dropped_scenes", budget_dropped},
          {"warnings", warnings},
          {"histograms", std::move(histograms)}};
}

}  // namespace scenemix::pipeline
