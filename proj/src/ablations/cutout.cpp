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

#include "scenemix/ablations.hpp"
#include "scenemix/error.hpp"

namespace scenemix {

void CutoutSpec::validate() const {
  if (!edge_range.valid() || edge_range.lo < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "cutout edge range must be ordered and non-negative");
  }
  if (!(cuts_per_10k >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "cuts per 10k points must be non-negative");
}

std::size_t cutout_count(const CutoutSpec& spec, std::size_t n) {
  return static_cast<std::size_t>(std::llround(spec.cuts_per_10k * static_cast<double>(n) / 1e4));
}

CutoutResult cutout(const PointCloud& cloud, const CutoutSpec& spec, RngStream& rng) {
  spec.validate();
  CutoutResult out;
  const std::size_t cuts = cutout_count(spec, cloud.size());
  if (cuts == 0) {
    out.cloud = cloud;
    return out;
  }

  const Aabb bounds = aabb_of(cloud);
  out.boxes.reserve(cuts);
  for (std::size_t c = 0; c < cuts; ++c) {
    Vec3 center;
    Vec3 half;
    for (int a = 0; a < 3; ++a) center[a] = rng.uniform(bounds.min_corner[a], bounds.max_corner[a]);
    for (int a = 0; a < 3; ++a) half[a] = 0.5 * rng.uniform(spec.edge_range.lo, spec.edge_range.hi);
    out.boxes.push_back({center - half, center + half});
  }

  std::vector<bool> keep(cloud.size(), true);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (const Aabb& box : out.boxes) {
      if (box.contains_strict(cloud.positions[i])) {
        keep[i] = false;
        ++out.removed;
        break;
      }
    }
  }
  out.cloud = cloud.filter(keep);
  return out;
}

}  // namespace scenemix
