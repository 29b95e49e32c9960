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

#include "scenemix/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scenemix/error.hpp"

namespace scenemix {

namespace {

template <typename T>
void check_length(const std::optional<std::vector<T>>& array, std::size_t n, const char* name) {
  if (array && array->size() != n) {
    throw Error(ErrorCode::kAttributeMismatch,
                std::string(name) + " has " + std::to_string(array->size()) + " entries, expected " +
                    std::to_string(n));
  }
}

template <typename T>
std::optional<std::vector<T>> gather(const std::optional<std::vector<T>>& array,
                                     std::span<const std::size_t> indices) {
  if (!array) return std::nullopt;
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back((*array)[i]);
  return out;
}

void require_non_empty(const PointCloud& cloud, const char* what) {
  if (cloud.empty()) throw Error(ErrorCode::kEmptyCloud, std::string(what) + " of an empty cloud");
}

}  // namespace

void PointCloud::reset_loss_mask() { loss_mask.assign(size(), has_labels()); }

void PointCloud::check() const {
  const std::size_t n = size();
  check_length(colors, n, "colors");
  check_length(features, n, "features");
  check_length(labels, n, "labels");
  check_length(instances, n, "instances");
  if (loss_mask.size() != n) {
    throw Error(ErrorCode::kAttributeMismatch,
                "loss_mask has " + std::to_string(loss_mask.size()) + " entries, expected " +
                    std::to_string(n));
  }
}

PointCloud PointCloud::select(std::span<const std::size_t> indices) const {
  PointCloud out;
  out.positions.reserve(indices.size());
  out.loss_mask.reserve(indices.size());
  for (std::size_t i : indices) {
    out.positions.push_back(positions[i]);
    out.loss_mask.push_back(loss_mask[i]);
  }
  out.colors = gather(colors, indices);
  out.features = gather(features, indices);
  out.labels = gather(labels, indices);
  out.instances = gather(instances, indices);
  return out;
}

PointCloud PointCloud::filter(const std::vector<bool>& keep) const {
  std::vector<std::size_t> indices;
  indices.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (keep[i]) indices.push_back(i);
  }
  return select(indices);
}

PointCloud make_cloud(std::vector<Vec3> positions) {
  PointCloud cloud;
  cloud.positions = std::move(positions);
  cloud.reset_loss_mask();
  return cloud;
}

double Aabb::volume() const {
  const Vec3 e = extent();
  return e.x() * e.y() * e.z();
}

bool Aabb::contains(const Vec3& p) const {
  return (p.array() >= min_corner.array()).all() && (p.array() <= max_corner.array()).all();
}

bool Aabb::contains_strict(const Vec3& p) const {
  return (p.array() > min_corner.array()).all() && (p.array() < max_corner.array()).all();
}

Aabb Aabb::padded(double margin) const {
  const Vec3 m = Vec3::Constant(margin);
  return {min_corner - m, max_corner + m};
}

double intersection_volume(const Aabb& a, const Aabb& b) {
  const Vec3 lo = a.min_corner.cwiseMax(b.min_corner);
  const Vec3 hi = a.max_corner.cwiseMin(b.max_corner);
  const Vec3 e = (hi - lo).cwiseMax(0.0);
  return e.x() * e.y() * e.z();
}

bool intersects(const Aabb& a, const Aabb& b) {
  return (a.min_corner.array() <= b.max_corner.array()).all() &&
         (b.min_corner.array() <= a.max_corner.array()).all();
}

double box_distance(const Aabb& a, const Aabb& b) {
  const Vec3 gap = (a.min_corner - b.max_corner).cwiseMax(b.min_corner - a.max_corner).cwiseMax(0.0);
  return gap.norm();
}

Vec3 centroid(const PointCloud& cloud) {
  require_non_empty(cloud, "centroid");
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : cloud.positions) sum += p;
  return sum / static_cast<double>(cloud.size());
}

Aabb aabb_of(const PointCloud& cloud) {
  require_non_empty(cloud, "bounding box");
  Aabb box{cloud.positions.front(), cloud.positions.front()};
  for (const Vec3& p : cloud.positions) {
    box.min_corner = box.min_corner.cwiseMin(p);
    box.max_corner = box.max_corner.cwiseMax(p);
  }
  return box;
}

PointCloud translate(const PointCloud& cloud, const Vec3& offset) {
  PointCloud out = cloud;
  for (Vec3& p : out.positions) p += offset;
  return out;
}

PointCloud concat(std::span<const PointCloud> clouds, const ConcatOptions& options) {
  if (clouds.empty()) return PointCloud{};
  if (clouds.size() == 1) return clouds.front();

  const auto all_agree = [&](auto has) {
    return std::all_of(clouds.begin(), clouds.end(), has) ||
           std::none_of(clouds.begin(), clouds.end(), has);
  };
  const auto any_has = [&](auto has) { return std::any_of(clouds.begin(), clouds.end(), has); };

  const auto has_colors = [](const PointCloud& c) { return c.has_colors(); };
  const auto has_features = [](const PointCloud& c) { return c.has_features(); };
  const auto has_labels = [](const PointCloud& c) { return c.has_labels(); };
  const auto has_instances = [](const PointCloud& c) { return c.has_instances(); };

  if (!all_agree(has_colors)) throw Error(ErrorCode::kAttributeMismatch, "colors present on some clouds only");
  if (!all_agree(has_features)) throw Error(ErrorCode::kAttributeMismatch, "features present on some clouds only");
  if (!all_agree(has_labels) && !options.label_fill) {
    throw Error(ErrorCode::kAttributeMismatch, "labels present on some clouds only");
  }
  if (!all_agree(has_instances) && !options.instance_fill) {
    throw Error(ErrorCode::kAttributeMismatch, "instances present on some clouds only");
  }

  std::size_t total = 0;
  for (const PointCloud& c : clouds) total += c.size();

  PointCloud out;
  out.positions.reserve(total);
  out.loss_mask.reserve(total);
  if (any_has(has_colors)) out.colors.emplace().reserve(total);
  if (any_has(has_features)) out.features.emplace().reserve(total);
  if (any_has(has_labels)) out.labels.emplace().reserve(total);
  if (any_has(has_instances)) out.instances.emplace().reserve(total);

  for (const PointCloud& c : clouds) {
    out.positions.insert(out.positions.end(), c.positions.begin(), c.positions.end());
    if (out.colors) out.colors->insert(out.colors->end(), c.colors->begin(), c.colors->end());
    if (out.features) out.features->insert(out.features->end(), c.features->begin(), c.features->end());
    if (out.labels) {
      if (c.labels) {
        out.labels->insert(out.labels->end(), c.labels->begin(), c.labels->end());
      } else {
        out.labels->insert(out.labels->end(), c.size(), *options.label_fill);
      }
    }
    if (out.instances) {
      if (c.instances) {
        out.instances->insert(out.instances->end(), c.instances->begin(), c.instances->end());
      } else {
        out.instances->insert(out.instances->end(), c.size(), *options.instance_fill);
      }
    }
    // A cloud without labels contributes no supervision.
    if (out.labels && !c.labels) {
      out.loss_mask.insert(out.loss_mask.end(), c.size(), false);
    } else {
      out.loss_mask.insert(out.loss_mask.end(), c.loss_mask.begin(), c.loss_mask.end());
    }
  }
  return out;
}

}  // namespace scenemix
