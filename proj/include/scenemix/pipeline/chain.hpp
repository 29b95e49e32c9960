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
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenemix/instance_db.hpp"
#include "scenemix/pipeline/config.hpp"
#include "scenemix/point_cloud.hpp"
#include "scenemix/rng.hpp"

namespace scenemix::pipeline {

/// Loads each instance database once; safe to share between workers.
class InstanceDbCache {
 public:
  std::shared_ptr<const InstanceDb> get(const std::filesystem::path& dir);

 private:
  std::mutex mutex_;
  std::map<std::filesystem::path, std::shared_ptr<const InstanceDb>> loaded_;
};

struct StepContext {
  std::uint32_t ignore_label = kDefaultIgnoreLabel;
  InstanceDbCache* instance_dbs = nullptr;
};

struct StepOutcome {
  PointCloud cloud;
  nlohmann::json draws = nlohmann::json::object();  // what the op sampled
  bool skipped = false;
  std::string note;
};

/// Applies one chain step. `step.params` must be complete (as parse_config
/// leaves them).
StepOutcome apply_step(const ChainStep& step, const PointCloud& cloud, RngStream& rng, const StepContext& ctx);

struct StepTrace {
  std::string op;
  SeedPath seed;
  nlohmann::json params;
  nlohmann::json draws;
  std::uint64_t raw_draws = 0;
  std::size_t points_before = 0;
  std::size_t points_after = 0;
  bool skipped = false;
  std::string note;
  double seconds = 0.0;
};

struct ChainResult {
  PointCloud cloud;
  std::vector<StepTrace> steps;
};

/// Stream of step `index` for a scene: (seed, scene, epoch, "chain/<index>/<op>").
RngStream step_stream(std::uint64_t master_seed, std::uint64_t scene, std::uint64_t epoch, std::size_t index,
                      const std::string& op);

ChainResult run_chain(const std::vector<ChainStep>& chain, const PointCloud& cloud, std::uint64_t master_seed,
                      std::uint64_t scene, std::uint64_t epoch, const StepContext& ctx);

nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const SeedPath& seed);
SeedPath seed_from_json(const nlohmann::json& j);

}  // namespace scenemix::pipeline
