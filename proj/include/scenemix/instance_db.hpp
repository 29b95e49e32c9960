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
#include <span>
#include <string>
#include <vector>

#include "scenemix/point_cloud.hpp"
#include "scenemix/rng.hpp"

namespace scenemix {

struct InstanceEntry {
  std::uint32_t label = 0;
  PointCloud cloud;  // centered at its own centroid
  std::string scene_id;
  Vec3 centroid = Vec3::Zero();  // where the instance sat in its scene
};

/// Objects cut out of labeled scenes, each re-centered at the origin.
/// Immutable after build.
class InstanceDb {
 public:
  InstanceDb() = default;
  explicit InstanceDb(std::vector<InstanceEntry> entries);

  const std::vector<InstanceEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const InstanceEntry& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::vector<InstanceEntry> entries_;
};

/// One entry per (scene, instance id != kNoInstance). Throws
/// kInconsistentInstance when an instance spans several semantic labels.
InstanceDb build_instance_db(std::span<const PointCloud> scenes, std::span<const std::string> scene_ids);

/**
 * Directory layout: `index.txt` with one "label scene_id file" line per entry,
 * plus one binary PLY per entry. The recorded centroid is kept as three extra
 * columns so the source points can be reconstructed.
 */
void save_instance_db(const InstanceDb& db, const std::filesystem::path& dir);
InstanceDb load_instance_db(const std::filesystem::path& dir);

enum class InstancePlacement {
  kOverlapping,  // at the centroid of a random instance of the scene
  kFree,         // uniformly inside the scene's bounding box
};

struct InstanceMixResult {
  PointCloud cloud;
  std::vector<std::size_t> entries;  // db indices placed
  std::vector<Vec3> positions;       // where each was placed
};

/// Places round(ratio * instance_count) database instances, sampled uniformly
/// with replacement, into the scene. Placed instances get fresh instance ids
/// above the scene's maximum.
InstanceMixResult mix_instances(const PointCloud& scene, const InstanceDb& db, double ratio,
                                InstancePlacement placement, RngStream& rng);

/// Distinct instance ids in first-appearance order, kNoInstance excluded.
std::vector<std::uint32_t> instance_ids(const PointCloud& cloud);

}  // namespace scenemix
