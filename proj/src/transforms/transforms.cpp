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

#include "scenemix/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "scenemix/error.hpp"

namespace scenemix {

CenterResult center_at_origin(const PointCloud& cloud) {
  const Vec3 c = centroid(cloud);
  return {translate(cloud, -c), c};
}

Augmented<RigidAugmentRecord> random_flip(const PointCloud& cloud, RngStream& rng, const AugmentParams& params) {
  Augmented<RigidAugmentRecord> out{cloud, {}};
  for (int axis = 0; axis < 2; ++axis) {
    out.record.flipped[axis] = rng.bernoulli(params.flip_prob_per_horizontal_axis);
  }
  for (Vec3& p : out.cloud.positions) {
    if (out.record.flipped[0]) p.x() = -p.x();
    if (out.record.flipped[1]) p.y() = -p.y();
  }
  return out;
}

Mat3 rotation_matrix(double up_angle, double tilt_x, double tilt_y) {
  const Eigen::AngleAxisd up(up_angle, Vec3::UnitZ());
  const Eigen::AngleAxisd rx(tilt_x, Vec3::UnitX());
  const Eigen::AngleAxisd ry(tilt_y, Vec3::UnitY());
  return (up * rx * ry).toRotationMatrix();
}

PointCloud rotate_about(const PointCloud& cloud, const Mat3& rotation, const Vec3& pivot) {
  PointCloud out = cloud;
  for (Vec3& p : out.positions) p = rotation * (p - pivot) + pivot;
  return out;
}

PointCloud scale_about(const PointCloud& cloud, double factor, const Vec3& pivot) {
  PointCloud out = cloud;
  for (Vec3& p : out.positions) p = (p - pivot) * factor + pivot;
  return out;
}

Augmented<RigidAugmentRecord> random_rotate(const PointCloud& cloud, RngStream& rng, const AugmentParams& params) {
  Augmented<RigidAugmentRecord> out{cloud, {}};
  out.record.up_angle = rng.uniform(params.up_axis_rotation.lo, params.up_axis_rotation.hi);
  out.record.tilt[0] = rng.uniform(params.tilt_rotation.lo, params.tilt_rotation.hi);
  out.record.tilt[1] = rng.uniform(params.tilt_rotation.lo, params.tilt_rotation.hi);
  if (cloud.empty()) return out;
  if (out.record.up_angle == 0.0 && out.record.tilt[0] == 0.0 && out.record.tilt[1] == 0.0) return out;
  const Mat3 r = rotation_matrix(out.record.up_angle, out.record.tilt[0], out.record.tilt[1]);
  out.cloud = rotate_about(cloud, r, centroid(cloud));
  return out;
}

Augmented<RigidAugmentRecord> random_scale(const PointCloud& cloud, RngStream& rng, const AugmentParams& params) {
  if (!(params.scale.lo > 0.0) || !params.scale.valid()) {
    throw Error(ErrorCode::kInvalidArgument, "scale interval must be positive and ordered");
  }
  Augmented<RigidAugmentRecord> out{cloud, {}};
  out.record.scale = rng.uniform(params.scale.lo, params.scale.hi);
  if (cloud.empty() || out.record.scale == 1.0) return out;
  out.cloud = scale_about(cloud, out.record.scale, centroid(cloud));
  return out;
}

Augmented<SubsampleRecord> random_subsample(const PointCloud& cloud, RngStream& rng, const AugmentParams& params) {
  const Interval keep = params.subsample_keep;
  if (!keep.valid() || !(keep.lo > 0.0) || keep.hi > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "subsample keep interval must lie in (0, 1]");
  }
  Augmented<SubsampleRecord> out{cloud, {}};
  out.record.keep_ratio = rng.uniform(keep.lo, keep.hi);
  const std::size_t n = cloud.size();
  const auto target = static_cast<std::size_t>(std::llround(out.record.keep_ratio * static_cast<double>(n)));
  out.record.kept = std::min(target, n);
  if (out.record.kept == n) return out;

  // Selection sampling: every k-subset is equally likely and order is kept.
  std::vector<std::size_t> indices;
  indices.reserve(out.record.kept);
  std::size_t needed = out.record.kept;
  for (std::size_t i = 0; i < n && needed > 0; ++i) {
    if (rng.index(n - i) < needed) {
      indices.push_back(i);
      --needed;
    }
  }
  out.cloud = cloud.select(indices);
  return out;
}

PointCloud apply_field(const PointCloud& cloud, const ElasticField& field) {
  PointCloud out = cloud;
  for (Vec3& p : out.positions) p += field.evaluate(p);
  return out;
}

Augmented<ElasticRecord> elastic_distort(const PointCloud& cloud, RngStream& rng, double granularity,
                                         double magnitude) {
  if (!(granularity > 0.0)) throw Error(ErrorCode::kInvalidArgument, "granularity must be positive");
  if (magnitude < 0.0) throw Error(ErrorCode::kInvalidArgument, "magnitude must be non-negative");
  Augmented<ElasticRecord> out{cloud, {granularity, magnitude, {0, 0, 0}, 0.0}};
  if (magnitude == 0.0 || cloud.empty()) return out;

  const ElasticField field = ElasticField::random(aabb_of(cloud), granularity, magnitude, rng);
  out.record.grid = field.dims();
  out.record.max_displacement = field.max_node_norm();
  out.cloud = apply_field(cloud, field);
  return out;
}

Augmented<ColorRecord> color_augment(const PointCloud& cloud, RngStream& rng, const AugmentParams& params) {
  if (!cloud.colors) throw Error(ErrorCode::kMissingAttribute, "color augmentation needs colors");
  Augmented<ColorRecord> out{cloud, {}};
  out.record.brightness = rng.uniform(params.color_brightness.lo, params.color_brightness.hi);
  out.record.contrast = rng.uniform(params.color_contrast.lo, params.color_contrast.hi);
  const double sigma = params.color_jitter_sigma;
  if (cloud.empty()) return out;

  auto& colors = *out.cloud.colors;
  if (out.record.contrast != 1.0) {
    Vec3 mean = Vec3::Zero();
    for (const Vec3& c : colors) mean += c;
    mean /= static_cast<double>(colors.size());
    for (Vec3& c : colors) c = (c - mean) * out.record.contrast + mean;
  }
  if (out.record.brightness != 0.0) {
    for (Vec3& c : colors) c.array() += out.record.brightness;
  }
  if (sigma > 0.0) {
    for (Vec3& c : colors) {
      for (int ch = 0; ch < 3; ++ch) c[ch] += sigma * rng.normal();
    }
  }
  for (Vec3& c : colors) c = c.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

Augmented<StandardChainRecord> augment_standard(const PointCloud& cloud, const RngStream& rng,
                                                const AugmentParams& params) {
  params.validate();
  Augmented<StandardChainRecord> out;
  auto centered = center_at_origin(cloud);
  out.record.centroid = centered.translation;
  out.record.rigid.translation = -centered.translation;

  RngStream flip_rng = rng.child("flip");
  auto flipped = random_flip(centered.cloud, flip_rng, params);
  out.record.rigid.flipped = flipped.record.flipped;

  RngStream rotate_rng = rng.child("rotate");
  auto rotated = random_rotate(flipped.cloud, rotate_rng, params);
  out.record.rigid.up_angle = rotated.record.up_angle;
  out.record.rigid.tilt = rotated.record.tilt;

  RngStream subsample_rng = rng.child("subsample");
  auto sampled = random_subsample(rotated.cloud, subsample_rng, params);
  out.record.subsample = sampled.record;

  PointCloud current = std::move(sampled.cloud);
  for (std::size_t i = 0; i < params.elastic.size(); ++i) {
    RngStream elastic_rng = rng.child("elastic" + std::to_string(i));
    auto distorted = elastic_distort(current, elastic_rng, params.elastic[i].granularity, params.elastic[i].magnitude);
    out.record.elastic.push_back(distorted.record);
    current = std::move(distorted.cloud);
  }

  RngStream scale_rng = rng.child("scale");
  auto scaled = random_scale(current, scale_rng, params);
  out.record.rigid.scale = scaled.record.scale;
  current = std::move(scaled.cloud);

  if (current.has_colors()) {
    RngStream color_rng = rng.child("color");
    auto colored = color_augment(current, color_rng, params);
    out.record.color = colored.record;
    current = std::move(colored.cloud);
  }
  out.cloud = std::move(current);
  return out;
}

}  // namespace scenemix
