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

#include <numbers>
#include <vector>

namespace scenemix {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool valid() const { return lo <= hi; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool operator==(const Interval&) const = default;
};

struct ElasticPass {
  double granularity = 0.2;  // grid cell size (m)
  double magnitude = 0.4;    // displacement scale (m)
  bool operator==(const ElasticPass&) const = default;
};

inline constexpr double kMaxTilt = std::numbers::pi / 64.0;

/// Per-scene augmentation ranges. Defaults are the standard training chain.
struct AugmentParams {
  double flip_prob_per_horizontal_axis = 0.5;
  Interval up_axis_rotation{0.0, 2.0 * std::numbers::pi};
  Interval tilt_rotation{-kMaxTilt, kMaxTilt};
  Interval scale{0.9, 1.1};
  Interval subsample_keep{0.8, 1.0};
  std::vector<ElasticPass> elastic{{0.2, 0.4}, {0.8, 1.6}};
  Interval color_brightness{-0.2, 0.2};
  Interval color_contrast{0.8, 1.25};
  double color_jitter_sigma = 0.05;

  /// Throws kInvalidArgument naming the first violated bound.
  void validate() const;

  /// Every range collapsed to the value that leaves a cloud unchanged.
  static AugmentParams identity();

  bool operator==(const AugmentParams&) const = default;
};

}  // namespace scenemix
