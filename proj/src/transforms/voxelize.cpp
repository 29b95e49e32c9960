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
#include <unordered_set>

#include "scenemix/error.hpp"
#include "scenemix/transforms.hpp"

namespace scenemix {

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

PointCloud voxelize(const PointCloud& cloud, double cell_size) {
  if (!(cell_size > 0.0)) throw Error(ErrorCode::kInvalidArgument, "voxel cell size must be positive");
  std::unordered_set<CellKey, CellHash> occupied;
  occupied.reserve(cloud.size());
  std::vector<std::size_t> keep;
  keep.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    const CellKey key{static_cast<std::int64_t>(std::floor(p.x() / cell_size)),
                      static_cast<std::int64_t>(std::floor(p.y() / cell_size)),
                      static_cast<std::int64_t>(std::floor(p.z() / cell_size))};
    if (occupied.insert(key).second) keep.push_back(i);
  }
  return cloud.select(keep);
}

}  // namespace scenemix
