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

#include "scenemix/instance_db.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "scenemix/ablations.hpp"
#include "scenemix/error.hpp"
#include "scenemix/io.hpp"

namespace scenemix {

InstanceDb::InstanceDb(std::vector<InstanceEntry> entries) : entries_(std::move(entries)) {
  for (const InstanceEntry& e : entries_) {
    if (e.cloud.empty()) throw Error(ErrorCode::kEmptyCloud, "instance database entries must be non-empty");
  }
}

std::vector<std::uint32_t> instance_ids(const PointCloud& cloud) {
  if (!cloud.instances) throw Error(ErrorCode::kMissingAttribute, "instance ids required");
  std::vector<std::uint32_t> ids;
  std::unordered_set<std::uint32_t> seen;
  for (std::uint32_t id : *cloud.instances) {
    if (id != kNoInstance && seen.insert(id).second) ids.push_back(id);
  }
  return ids;
}

InstanceDb build_instance_db(std::span<const PointCloud> scenes, std::span<const std::string> scene_ids) {
  if (!scene_ids.empty() && scene_ids.size() != scenes.size()) {
    throw Error(ErrorCode::kCountMismatch, "one scene id per scene required");
  }
  std::vector<InstanceEntry> entries;
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    const PointCloud& scene = scenes[s];
    const std::string scene_id = scene_ids.empty() ? std::to_string(s) : scene_ids[s];
    if (!scene.labels || !scene.instances) {
      throw Error(ErrorCode::kMissingAttribute, "scene " + scene_id + " lacks labels or instance ids");
    }
    const std::vector<std::uint32_t> ids = instance_ids(scene);
    std::unordered_map<std::uint32_t, std::size_t> slot;
    for (std::size_t i = 0; i < ids.size(); ++i) slot.emplace(ids[i], i);
    std::vector<std::vector<std::size_t>> members(ids.size());
    for (std::size_t i = 0; i < scene.size(); ++i) {
      const std::uint32_t id = (*scene.instances)[i];
      if (id != kNoInstance) members[slot.at(id)].push_back(i);
    }

    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::uint32_t label = (*scene.labels)[members[i].front()];
      for (std::size_t p : members[i]) {
        if ((*scene.labels)[p] != label) {
          throw Error(ErrorCode::kInconsistentInstance, "instance " + std::to_string(ids[i]) + " of scene " + scene_id +
                                                            " carries several semantic labels");
        }
      }
      PointCloud part = scene.select(members[i]);
      const Vec3 c = centroid(part);
      entries.push_back({label, translate(part, -c), scene_id, c});
    }
  }
  return InstanceDb(std::move(entries));
}

void save_instance_db(const InstanceDb& db, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string index;
  char name[32];
  char line[256];
  for (std::size_t i = 0; i < db.size(); ++i) {
    const InstanceEntry& e = db[i];
    if (e.scene_id.empty() || std::any_of(e.scene_id.begin(), e.scene_id.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
      throw Error(ErrorCode::kInvalidArgument, "scene ids in an instance database must be non-empty without spaces");
    }
    std::snprintf(name, sizeof(name), "entry_%06zu.ply", i);
    io::write_file(dir / name, io::write_ply(e.cloud));
    std::snprintf(line, sizeof(line), " %s %.17g %.17g %.17g\n", name, e.centroid.x(), e.centroid.y(), e.centroid.z());
    index += std::to_string(e.label) + " " + e.scene_id + line;
  }
  io::write_file(dir / "index.txt", index);
}

InstanceDb load_instance_db(const std::filesystem::path& dir) {
  const io::Bytes raw = io::read_file(dir / "index.txt");
  std::istringstream in(std::string(raw.begin(), raw.end()));
  std::vector<InstanceEntry> entries;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(text);
    InstanceEntry e;
    std::string file;
    double c[3] = {0.0, 0.0, 0.0};
    if (!(fields >> e.label >> e.scene_id >> file)) {
      throw LineError(ErrorCode::kParseError, line_no, "expected 'label scene_id file'");
    }
    // Centroid columns are optional for hand-written indexes.
    if (fields >> c[0]) {
      if (!(fields >> c[1] >> c[2])) throw LineError(ErrorCode::kParseError, line_no, "incomplete centroid");
    }
    e.centroid = Vec3(c[0], c[1], c[2]);
    e.cloud = io::read_ply(io::read_file(dir / file));
    entries.push_back(std::move(e));
  }
  return InstanceDb(std::move(entries));
}

InstanceMixResult mix_instances(const PointCloud& scene, const InstanceDb& db, double ratio,
                                InstancePlacement placement, RngStream& rng) {
  if (!(ratio >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "instance ratio must be non-negative");
  const std::vector<std::uint32_t> ids = instance_ids(scene);
  if (ids.empty()) throw Error(ErrorCode::kEmptyInstanceSet, "scene has no instances to mix with");
  if (db.empty()) throw Error(ErrorCode::kInvalidArgument, "instance database is empty");

  InstanceMixResult out;
  const auto count = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(ids.size())));
  if (count == 0) {
    out.cloud = scene;
    return out;
  }

  std::vector<Vec3> centers;
  if (placement == InstancePlacement::kOverlapping) {
    for (const PointCloud& inst : isolate_instances(scene)) centers.push_back(centroid(inst));
  }
  const Aabb bounds = aabb_of(scene);
  std::uint32_t next_id = *std::max_element(ids.begin(), ids.end()) + 1;

  std::vector<PointCloud> parts{scene};
  for (std::size_t j = 0; j < count; ++j) {
    const auto entry = static_cast<std::size_t>(rng.index(db.size()));
    Vec3 at;
    if (placement == InstancePlacement::kOverlapping) {
      at = centers[static_cast<std::size_t>(rng.index(centers.size()))];
    } else {
      for (int a = 0; a < 3; ++a) at[a] = rng.uniform(bounds.min_corner[a], bounds.max_corner[a]);
    }
    PointCloud placed = translate(db[entry].cloud, at);
    placed.instances.emplace(placed.size(), next_id++);
    if (!placed.has_labels()) placed.labels.emplace(placed.size(), db[entry].label);
    placed.reset_loss_mask();
    out.entries.push_back(entry);
    out.positions.push_back(at);
    parts.push_back(std::move(placed));
  }
  out.cloud = concat(parts);
  return out;
}

}  // namespace scenemix
