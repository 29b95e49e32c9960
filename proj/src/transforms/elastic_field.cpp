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

#include "scenemix/elastic_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scenemix/error.hpp"

namespace scenemix {

namespace {

constexpr int kBlurPasses = 3;
constexpr std::size_t kMaxNodes = std::size_t{1} << 26;
// Coordinates this close to a node (in cell units) are treated as on it.
constexpr double kNodeSnap = 1e-9;

// Width-3 box blur along one axis, zero outside the grid.
void blur_axis(std::vector<Vec3>& values, const ElasticField::Dims& dims, int axis) {
  const std::size_t stride = axis == 0 ? 1 : axis == 1 ? dims[0] : dims[0] * dims[1];
  const std::size_t len = dims[axis];
  std::vector<Vec3> line(len);
  const std::size_t total = values.size();
  for (std::size_t base = 0; base < total; ++base) {
    // Visit each line once, from its first node.
    if ((base / stride) % len != 0) continue;
    for (std::size_t i = 0; i < len; ++i) line[i] = values[base + i * stride];
    for (std::size_t i = 0; i < len; ++i) {
      Vec3 sum = line[i];
      if (i > 0) sum += line[i - 1];
      if (i + 1 < len) sum += line[i + 1];
      values[base + i * stride] = sum / 3.0;
    }
  }
}

}  // namespace

ElasticField::ElasticField(Vec3 origin, double granularity, Dims dims, std::vector<Vec3> displacement)
    : origin_(std::move(origin)), granularity_(granularity), dims_(dims), displacement_(std::move(displacement)) {
  if (!(granularity_ > 0.0)) throw Error(ErrorCode::kInvalidArgument, "granularity must be positive");
  if (dims_[0] < 2 || dims_[1] < 2 || dims_[2] < 2) {
    throw Error(ErrorCode::kInvalidArgument, "elastic grid needs at least 2 nodes per axis");
  }
  if (displacement_.size() != dims_[0] * dims_[1] * dims_[2]) {
    throw Error(ErrorCode::kCountMismatch, "displacement count does not match grid dims");
  }
}

ElasticField ElasticField::random(const Aabb& bounds, double granularity, double magnitude, RngStream& rng) {
  if (!(granularity > 0.0)) throw Error(ErrorCode::kInvalidArgument, "granularity must be positive");
  if (magnitude < 0.0) throw Error(ErrorCode::kInvalidArgument, "magnitude must be non-negative");

  const Aabb padded = bounds.padded(granularity);
  Dims dims{};
  std::size_t total = 1;
  for (int a = 0; a < 3; ++a) {
    const double cells = std::floor(padded.extent()[a] / granularity);
    if (!(cells < static_cast<double>(kMaxNodes))) {
      throw Error(ErrorCode::kInvalidArgument, "elastic grid too large for granularity " + std::to_string(granularity));
    }
    dims[a] = static_cast<std::size_t>(cells) + 2;
    total *= dims[a];
    if (total > kMaxNodes) {
      throw Error(ErrorCode::kInvalidArgument, "elastic grid too large for granularity " + std::to_string(granularity));
    }
  }

  std::vector<Vec3> noise(total);
  for (Vec3& v : noise) {
    const double x = rng.normal();
    const double y = rng.normal();
    const double z = rng.normal();
    v = Vec3(x, y, z);
  }
  for (int pass = 0; pass < kBlurPasses; ++pass) {
    for (int axis = 0; axis < 3; ++axis) blur_axis(noise, dims, axis);
  }
  for (Vec3& v : noise) v *= magnitude;

  return ElasticField(padded.min_corner, granularity, dims, std::move(noise));
}

Vec3 ElasticField::node_position(std::size_t i, std::size_t j, std::size_t k) const {
  return origin_ + granularity_ * Vec3(static_cast<double>(i), static_cast<double>(j), static_cast<double>(k));
}

const Vec3& ElasticField::node(std::size_t i, std::size_t j, std::size_t k) const {
  return displacement_[flat(i, j, k)];
}

double ElasticField::max_node_norm() const {
  double best = 0.0;
  for (const Vec3& v : displacement_) best = std::max(best, v.norm());
  return best;
}

Vec3 ElasticField::evaluate(const Vec3& p) const {
  std::size_t cell[3];
  double t[3];
  for (int a = 0; a < 3; ++a) {
    double u = (p[a] - origin_[a]) / granularity_;
    const double nearest = std::round(u);
    if (std::abs(u - nearest) < kNodeSnap) u = nearest;
    const double last_cell = static_cast<double>(dims_[a] - 2);
    const double c = std::clamp(std::floor(u), 0.0, last_cell);
    cell[a] = static_cast<std::size_t>(c);
    t[a] = std::clamp(u - c, 0.0, 1.0);
  }

  const auto& [i, j, k] = cell;
  const auto lerp = [](const Vec3& a, const Vec3& b, double w) -> Vec3 { return a * (1.0 - w) + b * w; };
  const Vec3 c00 = lerp(node(i, j, k), node(i + 1, j, k), t[0]);
  const Vec3 c10 = lerp(node(i, j + 1, k), node(i + 1, j + 1, k), t[0]);
  const Vec3 c01 = lerp(node(i, j, k + 1), node(i + 1, j, k + 1), t[0]);
  const Vec3 c11 = lerp(node(i, j + 1, k + 1), node(i + 1, j + 1, k + 1), t[0]);
  const Vec3 c0 = lerp(c00, c10, t[1]);
  const Vec3 c1 = lerp(c01, c11, t[1]);
  return lerp(c0, c1, t[2]);
}

}  // namespace scenemix
