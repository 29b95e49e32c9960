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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scenemix/mixing.hpp"

namespace scenemix::pipeline {

enum class SceneFormat { kPly, kKitti, kXyzrgb };
enum class OutputFormat { kPly, kKitti };

struct DatasetConfig {
  SceneFormat format = SceneFormat::kPly;
  std::filesystem::path root;
  double subset_fraction = 1.0;
  std::uint64_t subset_seed = 0;
  bool operator==(const DatasetConfig&) const = default;
};

/// One chain entry. `params` always holds every parameter of the op, with
/// defaults filled in by parse_config().
struct ChainStep {
  std::string op;
  nlohmann::json params = nlohmann::json::object();
  bool operator==(const ChainStep&) const = default;
};

struct OutputConfig {
  OutputFormat format = OutputFormat::kPly;
  std::filesystem::path directory = "scenemix_out";
  std::size_t preview_count = 4;
  bool operator==(const OutputConfig&) const = default;
};

struct PipelineConfig {
  DatasetConfig dataset;
  std::vector<ChainStep> chain;
  MixPolicy mix;
  std::size_t batch_size = 6;  // scenes per composed batch
  OutputConfig output;
  std::uint64_t master_seed = 0;
  std::size_t epochs = 1;
  std::size_t workers = 1;
  bool operator==(const PipelineConfig&) const = default;
};

/// Ops a chain step may name, in documentation order.
const std::vector<std::string>& registered_ops();

/// Every parameter of `op` at its default value. Throws ConfigError for
/// unknown ops.
nlohmann::json default_params(std::string_view op);

/// The standard per-scene chain used when a config names none.
std::vector<ChainStep> default_chain();

/**
 * Parses and validates a JSON config (comments allowed). Unknown keys,
 * wrong types, and out-of-range values throw ConfigError naming the key path,
 * e.g. "chain[2].range".
 */
PipelineConfig parse_config(std::string_view text);

/// Canonical JSON with every default spelled out; parse_config() of the result
/// yields an equal config.
std::string serialize_config(const PipelineConfig& config);

PipelineConfig load_config(const std::filesystem::path& path);

std::string_view to_string(SceneFormat format);
std::string_view to_string(OutputFormat format);

}  // namespace scenemix::pipeline
