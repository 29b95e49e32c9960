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

namespace {

struct Synthetic {
  std::vector<Vec3> positions;
  std::vector<Vec3> colors;
  std::vector<double> features;
};

// Appends synthetic points; they are never supervised.
PointCloud append_synthetic(const PointCloud& cloud, const Synthetic& added, std::uint32_t ignore_label) {
  PointCloud out = cloud;
  const std::size_t n = added.positions.size();
  out.positions.insert(out.positions.end(), added.positions.begin(), added.positions.end());
  if (out.colors) out.colors->insert(out.colors->end(), added.colors.begin(), added.colors.end());
  if (out.features) out.features->insert(out.features->end(), added.features.begin(), added.features.end());
  if (out.labels) out.labels->insert(out.labels->end(), n, ignore_label);
  if (out.instances) out.instances->insert(out.instances->end(), n, kNoInstance);
  out.loss_mask.insert(out.loss_mask.end(), n, false);
  return out;
}

Vec3 uniform_in_ball(RngStream& rng, double radius) {
  for (;;) {
    const Vec3 v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    if (v.squaredNorm() <= 1.0) return radius * v;
  }
}

}  // namespace

PointCloud noise_near_surface(const PointCloud& cloud, RngStream& rng, double fraction, double radius,
                              std::uint32_t ignore_label) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "noise fraction must lie in [0, 1]");
  if (!(radius >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise radius must be non-negative");
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(cloud.size())));
  if (count == 0) return cloud;

  Synthetic added;
  added.positions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto anchor = static_cast<std::size_t>(rng.index(cloud.size()));
    added.positions.push_back(cloud.positions[anchor] + uniform_in_ball(rng, radius));
    if (cloud.colors) added.colors.push_back((*cloud.colors)[anchor]);
    if (cloud.features) added.features.push_back((*cloud.features)[anchor]);
  }
  return append_synthetic(cloud, added, ignore_label);
}

std::array<std::size_t, 3> noise_grid_dims(const Aabb& box, double cell) {
  std::array<std::size_t, 3> dims{};
  for (int a = 0; a < 3; ++a) {
    dims[a] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(box.extent()[a] / cell)));
  }
  return dims;
}

PointCloud noise_uniform(const PointCloud& cloud, RngStream& rng, double cell, double offset,
                         std::uint32_t ignore_label) {
  if (!(cell > 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise cell must be positive");
  if (!(offset >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise offset must be non-negative");
  if (cloud.empty()) return cloud;

  const Aabb box = aabb_of(cloud);
  const auto dims = noise_grid_dims(box, cell);
  Synthetic added;
  added.positions.reserve(dims[0] * dims[1] * dims[2]);
  for (std::size_t k = 0; k < dims[2]; ++k) {
    for (std::size_t j = 0; j < dims[1]; ++j) {
      for (std::size_t i = 0; i < dims[0]; ++i) {
        const Vec3 center = box.min_corner + cell * Vec3(static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5,
                                                         static_cast<double>(k) + 0.5);
        Vec3 jitter;
        for (int a = 0; a < 3; ++a) jitter[a] = rng.uniform(-offset, offset);
        added.positions.push_back(center + jitter);
        if (cloud.colors) added.colors.emplace_back(rng.uniform01(), rng.uniform01(), rng.uniform01());
        if (cloud.features) added.features.push_back(0.0);
      }
    }
  }
  return append_synthetic(cloud, added, ignore_label);
}

}  // namespace scenemix
