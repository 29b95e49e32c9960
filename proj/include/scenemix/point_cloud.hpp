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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace scenemix {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Default semantic id for points that must not be supervised.
inline constexpr std::uint32_t kDefaultIgnoreLabel = 255;

/// Instance id 0 marks points that belong to no annotated object.
inline constexpr std::uint32_t kNoInstance = 0;

/// Index of the vertical axis (z-up scenes).
inline constexpr int kUpAxis = 2;

/**
 * A scene as parallel per-point arrays.
 *
 * Every optional array that is present has exactly positions.size() entries.
 * loss_mask is always present; it is all-true for freshly labeled clouds and
 * all-false for unlabeled ones (see reset_loss_mask()).
 */
struct PointCloud {
  std::vector<Vec3> positions;
  std::optional<std::vector<Vec3>> colors;            // RGB in [0,1]
  std::optional<std::vector<double>> features;        // e.g. reflectance
  std::optional<std::vector<std::uint32_t>> labels;   // semantic ids
  std::optional<std::vector<std::uint32_t>> instances;
  std::vector<bool> loss_mask;

  std::size_t size() const noexcept { return positions.size(); }
  bool empty() const noexcept { return positions.empty(); }

  bool has_colors() const noexcept { return colors.has_value(); }
  bool has_features() const noexcept { return features.has_value(); }
  bool has_labels() const noexcept { return labels.has_value(); }
  bool has_instances() const noexcept { return instances.has_value(); }

  /// Sets loss_mask to its default for the current label state.
  void reset_loss_mask();

  /// Throws kAttributeMismatch when any parallel array is misaligned.
  void check() const;

  /// Points at the given (ascending or arbitrary) indices, all arrays filtered
  /// identically.
  PointCloud select(std::span<const std::size_t> indices) const;

  /// Points whose keep flag is set, in input order.
  PointCloud filter(const std::vector<bool>& keep) const;

  bool operator==(const PointCloud&) const = default;
};

/// Convenience: a cloud from positions only, loss mask set to default.
PointCloud make_cloud(std::vector<Vec3> positions);

struct Aabb {
  Vec3 min_corner = Vec3::Zero();
  Vec3 max_corner = Vec3::Zero();

  Vec3 extent() const { return max_corner - min_corner; }
  Vec3 center() const { return 0.5 * (min_corner + max_corner); }
  double volume() const;

  bool contains(const Vec3& p) const;
  /// Strictly inside on every axis.
  bool contains_strict(const Vec3& p) const;

  Aabb translated(const Vec3& t) const { return {min_corner + t, max_corner + t}; }
  Aabb padded(double margin) const;
};

/// Intersection volume; 0 for touching or disjoint boxes.
double intersection_volume(const Aabb& a, const Aabb& b);

/// True when the closed boxes share at least one point.
bool intersects(const Aabb& a, const Aabb& b);

/// Euclidean distance between the closest points of two boxes.
double box_distance(const Aabb& a, const Aabb& b);

Vec3 centroid(const PointCloud& cloud);
Aabb aabb_of(const PointCloud& cloud);
PointCloud translate(const PointCloud& cloud, const Vec3& offset);

/// How concat treats clouds that disagree on label/instance presence.
struct ConcatOptions {
  /// Label given to points of clouds without labels; such points are also
  /// excluded from the loss mask. Without a fill, mismatched presence throws.
  std::optional<std::uint32_t> label_fill;
  /// Instance id given to points of clouds without instances.
  std::optional<std::uint32_t> instance_fill;
};

PointCloud concat(std::span<const PointCloud> clouds, const ConcatOptions& options = {});

}  // namespace scenemix
