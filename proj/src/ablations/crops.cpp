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

#include <cmath>
#include <unordered_map>

#include "scenemix/ablations.hpp"
#include "scenemix/error.hpp"
#include "scenemix/instance_db.hpp"

namespace scenemix {

namespace {

constexpr int kMaxCropAttempts = 10;

}  // namespace

CropResult crop_cube_fraction(const PointCloud& cloud, double fraction, RngStream& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "crop fraction must lie in (0, 1]");
  const Aabb bounds = aabb_of(cloud);
  if (fraction == 1.0) return {cloud, bounds, 1};

  const Vec3 edge = std::cbrt(fraction) * bounds.extent();
  const Vec3 slack = bounds.extent() - edge;
  for (int attempt = 1; attempt <= kMaxCropAttempts; ++attempt) {
    Aabb box;
    for (int a = 0; a < 3; ++a) {
      box.min_corner[a] = bounds.min_corner[a] + rng.uniform(0.0, slack[a]);
      box.max_corner[a] = std::min(box.min_corner[a] + edge[a], bounds.max_corner[a]);
    }
    std::vector<bool> keep(cloud.size());
    bool any = false;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      keep[i] = box.contains(cloud.positions[i]);
      any = any || keep[i];
    }
    if (any) return {cloud.filter(keep), box, attempt};
  }
  throw Error(ErrorCode::kEmptyCrop, "no points inside " + std::to_string(kMaxCropAttempts) + " crop attempts");
}

PointCloud crop_sphere_at(const PointCloud& cloud, const Vec3& center, double radius) {
  std::vector<bool> keep(cloud.size());
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < cloud.size(); ++i) keep[i] = (cloud.positions[i] - center).squaredNorm() <= r2;
  return cloud.filter(keep);
}

SphereCropResult crop_sphere(const PointCloud& cloud, RngStream& rng, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sphere radius must be positive");
  if (cloud.empty()) throw Error(ErrorCode::kEmptyCloud, "cannot pick a crop center in an empty cloud");
  const Vec3 center = cloud.positions[static_cast<std::size_t>(rng.index(cloud.size()))];
  return {crop_sphere_at(cloud, center, radius), center};
}

std::vector<PointCloud> isolate_instances(const PointCloud& cloud) {
  if (!cloud.instances) throw Error(ErrorCode::kMissingAttribute, "instance ids required");
  const std::vector<std::uint32_t> ids = instance_ids(cloud);
  std::unordered_map<std::uint32_t, std::size_t> slot;
  for (std::size_t i = 0; i < ids.size(); ++i) slot.emplace(ids[i], i);

  std::vector<std::vector<std::size_t>> members(ids.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const std::uint32_t id = (*cloud.instances)[i];
    if (id != kNoInstance) members[slot.at(id)].push_back(i);
  }
  std::vector<PointCloud> out;
  out.reserve(ids.size());
  for (const auto& m : members) out.push_back(cloud.select(m));
  return out;
}

}  // namespace scenemix
