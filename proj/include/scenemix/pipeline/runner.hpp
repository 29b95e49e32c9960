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
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenemix/io.hpp"
#include "scenemix/mixing.hpp"
#include "scenemix/pipeline/config.hpp"

namespace scenemix::pipeline {

struct SceneRef {
  std::string id;  // file stem
  std::filesystem::path path;
  std::filesystem::path label_path;  // KITTI only; empty when absent
};

/// Scene files under the dataset root, sorted by file name. A KITTI root may
/// hold velodyne/ and labels/ subdirectories or .bin files with sibling
/// .label files.
std::vector<SceneRef> list_scenes(const DatasetConfig& dataset);

PointCloud load_scene(const SceneRef& scene, SceneFormat format);

/// round(fraction * n) indices (at least one), sorted, chosen with
/// derive_stream(seed, 0, 0, "subset"). The same subset serves every epoch.
std::vector<std::size_t> select_subset(std::size_t n, double fraction, std::uint64_t seed);

/// Seeded Fisher-Yates permutation of `indices` for one epoch, drawn from
/// derive_stream(master_seed, 0, epoch, "shuffle").
std::vector<std::size_t> epoch_order(std::vector<std::size_t> indices, std::uint64_t master_seed, std::uint64_t epoch);

/// Encoded sample files keyed by extension (".ply", or ".bin" plus ".label").
std::map<std::string, io::Bytes> encode_sample(const PointCloud& cloud, OutputFormat format);

struct RunSummary {
  std::size_t samples = 0;
  std::size_t total_points = 0;
  std::size_t supervised_points = 0;
  std::size_t skipped = 0;
  std::size_t budget_dropped = 0;
  std::size_t scenes_per_epoch = 0;
  std::map<std::string, double> op_seconds;  // wall time per chain op
  std::filesystem::path manifest;
};

/**
 * Runs every epoch: shuffle, chain, compose, write samples to the output
 * directory and one JSON record per line to manifest.jsonl. Throws Error or
 * ConfigError on fatal problems (no readable scenes, infeasible placement).
 */
RunSummary run(const PipelineConfig& config);

/// Writes the first `n` mixed samples of epoch 0 to <output>/preview as PLY,
/// colored by source scene. Returns the written paths.
std::vector<std::filesystem::path> preview(const PipelineConfig& config, std::size_t n);

/// Distinct color of source `i` in previews.
Vec3 provenance_color(std::size_t i);

/// Rebuilds one "sample" manifest record from its recorded seeds and returns
/// the encoded files, byte-identical to what run() wrote.
std::map<std::string, io::Bytes> replay_sample(const PipelineConfig& config, const nlohmann::json& record);

}  // namespace scenemix::pipeline
