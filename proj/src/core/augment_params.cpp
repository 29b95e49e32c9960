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

#include "scenemix/augment_params.hpp"

#include <string>

#include "scenemix/error.hpp"

namespace scenemix {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

void AugmentParams::validate() const {
  require(flip_prob_per_horizontal_axis >= 0.0 && flip_prob_per_horizontal_axis <= 1.0,
          "flip probability must lie in [0, 1]");
  require(up_axis_rotation.valid(), "up-axis rotation interval is reversed");
  require(tilt_rotation.valid(), "tilt interval is reversed");
  require(tilt_rotation.lo >= -kMaxTilt && tilt_rotation.hi <= kMaxTilt,
          "tilt interval must stay within [-pi/64, pi/64]");
  require(scale.valid(), "scale interval is reversed");
  require(scale.lo > 0.0, "scale interval must be positive");
  require(subsample_keep.valid(), "subsample interval is reversed");
  require(subsample_keep.lo > 0.0 && subsample_keep.hi <= 1.0, "subsample keep ratio must lie in (0, 1]");
  for (const ElasticPass& pass : elastic) {
    require(pass.granularity > 0.0, "elastic granularity must be positive");
    require(pass.magnitude >= 0.0, "elastic magnitude must be non-negative");
  }
  require(color_brightness.valid(), "brightness interval is reversed");
  require(color_contrast.valid(), "contrast interval is reversed");
  require(color_contrast.lo >= 0.0, "contrast must be non-negative");
  require(color_jitter_sigma >= 0.0, "color jitter sigma must be non-negative");
}

AugmentParams AugmentParams::identity() {
  AugmentParams p;
  p.flip_prob_per_horizontal_axis = 0.0;
  p.up_axis_rotation = {0.0, 0.0};
  p.tilt_rotation = {0.0, 0.0};
  p.scale = {1.0, 1.0};
  p.subsample_keep = {1.0, 1.0};
  p.elastic = {};
  p.color_brightness = {0.0, 0.0};
  p.color_contrast = {1.0, 1.0};
  p.color_jitter_sigma = 0.0;
  return p;
}

}  // namespace scenemix
