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
#include <vector>

#include "scenemix/point_cloud.hpp"
#include "scenemix/rng.hpp"

namespace scenemix {

/**
 * Smooth random displacement field on a regular grid.
 *
 * Node (i, j, k) sits at origin + granularity * (i, j, k). Each node holds a
 * 3-vector drawn as unit Gaussian noise, smoothed with three passes of an
 * axis-separable width-3 box blur (zero outside the grid), then scaled by the
 * magnitude. Between nodes the field is trilinear; outside the grid it is
 * clamped to the nearest boundary cell.
 */
class ElasticField {
 public:
  using Dims = std::array<std::size_t, 3>;

  ElasticField(Vec3 origin, double granularity, Dims dims, std::vector<Vec3> displacement);

  /// Field covering `bounds` padded by one cell on every side.
  static ElasticField random(const Aabb& bounds, double granularity, double magnitude, RngStream& rng);

  const Vec3& origin() const noexcept { return origin_; }
  double granularity() const noexcept { return granularity_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t node_count() const noexcept { return displacement_.size(); }

  Vec3 node_position(std::size_t i, std::size_t j, std::size_t k) const;
  const Vec3& node(std::size_t i, std::size_t j, std::size_t k) const;
  double max_node_norm() const;

  /// Trilinear evaluation; returns a node's stored value exactly at that node.
  Vec3 evaluate(const Vec3& p) const;

 private:
  std::size_t flat(std::size_t i, std::size_t j, std::size_t k) const {
    return (k * dims_[1] + j) * dims_[0] + i;
  }

  Vec3 origin_;
  double granularity_;
  Dims dims_;
  std::vector<Vec3> displacement_;
};

}  // namespace scenemix
