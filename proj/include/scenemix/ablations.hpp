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

#include <array>
#include <cstdint>
#include <vector>

#include "scenemix/augment_params.hpp"
#include "scenemix/point_cloud.hpp"
#include "scenemix/rng.hpp"

namespace scenemix {

struct CutoutSpec {
  Interval edge_range{0.05, 2.0};  // cuboid edge lengths (m)
  double cuts_per_10k = 1.0;       // cuboids per 10^4 points

  void validate() const;
};

struct CutoutResult {
  PointCloud cloud;
  std::vector<Aabb> boxes;
  std::size_t removed = 0;
};

/// Removes every point strictly inside any of round(cuts_per_10k * N / 1e4)
/// random cuboids centered uniformly in the cloud's bounding box.
CutoutResult cutout(const PointCloud& cloud, const CutoutSpec& spec, RngStream& rng);

/// Number of cuboids cutout() samples for a cloud of n points.
std::size_t cutout_count(const CutoutSpec& spec, std::size_t n);

// Synthetic noise points are appended after the originals, carry the ignore
// label (when the cloud is labeled), instance kNoInstance, and a false loss
// mask.

/// Adds round(fraction * N) points, each a uniformly chosen original point
/// plus a uniform offset inside a ball of `radius`. Added points copy the
/// anchor's color and feature.
PointCloud noise_near_surface(const PointCloud& cloud, RngStream& rng, double fraction, double radius,
                              std::uint32_t ignore_label = kDefaultIgnoreLabel);

/// Per-axis cell counts of the uniform noise grid over `box`.
std::array<std::size_t, 3> noise_grid_dims(const Aabb& box, double cell);

/// Adds one point per cell of a `cell`-pitch grid anchored at the bounding box
/// minimum, at the cell center plus a uniform offset in [-offset, offset]^3.
/// Added points get a uniformly random color and feature 0.
PointCloud noise_uniform(const PointCloud& cloud, RngStream& rng, double cell, double offset,
                         std::uint32_t ignore_label = kDefaultIgnoreLabel);

struct CropResult {
  PointCloud cloud;
  Aabb box;
  int attempts = 1;
};

/// Keeps the points inside a random axis-aligned box whose edges are
/// fraction^(1/3) times the cloud's extents. Retries empty crops up to 10
/// times, then throws kEmptyCrop.
CropResult crop_cube_fraction(const PointCloud& cloud, double fraction, RngStream& rng);

struct SphereCropResult {
  PointCloud cloud;
  Vec3 center = Vec3::Zero();
};

/// Keeps the points within `radius` of a uniformly chosen original point.
SphereCropResult crop_sphere(const PointCloud& cloud, RngStream& rng, double radius);
PointCloud crop_sphere_at(const PointCloud& cloud, const Vec3& center, double radius);

/// One cloud per instance id (kNoInstance excluded), in first-appearance
/// order. Throws kMissingAttribute without instance ids.
std::vector<PointCloud> isolate_instances(const PointCloud& cloud);

}  // namespace scenemix
