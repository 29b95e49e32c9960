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
#include <filesystem>
#include <string>

#include "scenemix/point_cloud.hpp"
#include "scenemix/rng.hpp"

namespace scenemix::testing {

struct SceneSpec {
  std::size_t points = 1000;
  double extent = 4.0;  // room side length
  bool colors = true;
  bool features = false;
  bool labels = true;
  bool instances = true;
  std::uint32_t label_count = 20;
  std::uint32_t instance_count = 5;
};

/// Uniform points in [0, extent]^2 x [0, extent/2]. Instances are
/// contiguous runs, each with one label.
PointCloud random_scene(RngStream& rng, const SceneSpec& spec = {});

/// Writes `count` PLY scenes named scene_%03d.ply. Returns the directory.
std::filesystem::path write_ply_corpus(const std::filesystem::path& dir, std::size_t count, std::uint64_t seed,
                                       const SceneSpec& spec = {});

/// Fresh empty directory under the system temp dir.
std::filesystem::path fresh_dir(const std::string& name);

}  // namespace scenemix::testing
