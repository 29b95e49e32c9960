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
#include <optional>
#include <vector>

#include "scenemix/augment_params.hpp"
#include "scenemix/elastic_field.hpp"
#include "scenemix/point_cloud.hpp"
#include "scenemix/rng.hpp"

namespace scenemix {

/// What the rigid ops drew. Defaults describe the identity.
struct RigidAugmentRecord {
  std::array<bool, 2> flipped{false, false};  // x, y
  double up_angle = 0.0;                      // about z
  std::array<double, 2> tilt{0.0, 0.0};       // about x, about y
  double scale = 1.0;
  Vec3 translation = Vec3::Zero();
};

template <typename Record>
struct Augmented {
  PointCloud cloud;
  Record record;
};

struct CenterResult {
  PointCloud cloud;
  Vec3 translation;  // the centroid that was subtracted
};

CenterResult center_at_origin(const PointCloud& cloud);

/// Negates each horizontal coordinate (about the origin) with the configured
/// probability; the up axis is untouched.
Augmented<RigidAugmentRecord> random_flip(const PointCloud& cloud, RngStream& rng, const AugmentParams& params);

/// R_up(theta) * R_x(alpha) * R_y(beta) about the cloud centroid.
Augmented<RigidAugmentRecord> random_rotate(const PointCloud& cloud, RngStream& rng, const AugmentParams& params);

/// Uniform scale about the cloud centroid.
Augmented<RigidAugmentRecord> random_scale(const PointCloud& cloud, RngStream& rng, const AugmentParams& params);

Mat3 rotation_matrix(double up_angle, double tilt_x, double tilt_y);
PointCloud rotate_about(const PointCloud& cloud, const Mat3& rotation, const Vec3& pivot);
PointCloud scale_about(const PointCloud& cloud, double factor, const Vec3& pivot);

struct SubsampleRecord {
  double keep_ratio = 1.0;
  std::size_t kept = 0;
};

/// Keeps round(ratio * N) points chosen without replacement, original order
/// preserved.
Augmented<SubsampleRecord> random_subsample(const PointCloud& cloud, RngStream& rng, const AugmentParams& params);

struct ElasticRecord {
  double granularity = 0.0;
  double magnitude = 0.0;
  std::array<std::size_t, 3> grid{0, 0, 0};
  double max_displacement = 0.0;
};

/// Displaces every point by a random ElasticField built over the cloud's
/// bounding box. Magnitude 0 returns the input untouched.
Augmented<ElasticRecord> elastic_distort(const PointCloud& cloud, RngStream& rng, double granularity,
                                         double magnitude);

/// Applies displacement = field(p) to every point.
PointCloud apply_field(const PointCloud& cloud, const ElasticField& field);

struct ColorRecord {
  double brightness = 0.0;
  double contrast = 1.0;
};

/// Contrast about the per-channel mean, a brightness offset, then per-point
/// Gaussian jitter, clamped to [0, 1]. Throws kMissingAttribute without colors.
Augmented<ColorRecord> color_augment(const PointCloud& cloud, RngStream& rng, const AugmentParams& params);

struct StandardChainRecord {
  Vec3 centroid = Vec3::Zero();
  RigidAugmentRecord rigid;
  SubsampleRecord subsample;
  std::vector<ElasticRecord> elastic;
  std::optional<ColorRecord> color;  // empty when the cloud has no colors
};

/**
 * The standard per-scene chain: center, flip, rotate, subsample, elastic
 * passes, scale, then color when colors are present. Each step draws from its
 * own child stream of `rng`, so changing one step's parameters leaves the
 * draws of the others untouched.
 */
Augmented<StandardChainRecord> augment_standard(const PointCloud& cloud, const RngStream& rng,
                                                const AugmentParams& params);

/// One point per occupied cell of pitch `cell_size`: the first in input order.
PointCloud voxelize(const PointCloud& cloud, double cell_size);

}  // namespace scenemix
