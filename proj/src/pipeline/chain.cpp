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

#include "scenemix/pipeline/chain.hpp"

#include <chrono>

#include "scenemix/ablations.hpp"
#include "scenemix/error.hpp"
#include "scenemix/transforms.hpp"

namespace scenemix::pipeline {

using nlohmann::json;

namespace {

Interval interval(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json box_json(const Aabb& box) { return {{"min", to_json(box.min_corner)}, {"max", to_json(box.max_corner)}}; }

}  // namespace

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const SeedPath& seed) {
  return {{"master_seed", seed.master_seed}, {"scene", seed.scene}, {"epoch", seed.epoch}, {"tag", seed.tag}};
}

SeedPath seed_from_json(const json& j) {
  return {j.at("master_seed").get<std::uint64_t>(), j.at("scene").get<std::uint64_t>(),
          j.at("epoch").get<std::uint64_t>(), j.at("tag").get<std::string>()};
}

std::shared_ptr<const InstanceDb> InstanceDbCache::get(const std::filesystem::path& dir) {
  std::lock_guard lock(mutex_);
  auto& slot = loaded_[dir];
  if (!slot) slot = std::make_shared<const InstanceDb>(load_instance_db(dir));
  return slot;
}

StepOutcome apply_step(const ChainStep& step, const PointCloud& cloud, RngStream& rng, const StepContext& ctx) {
  const json& p = step.params;
  const std::string& op = step.op;
  StepOutcome out;
  AugmentParams params;

  if (op == "center") {
    CenterResult r = center_at_origin(cloud);
    out.cloud = std::move(r.cloud);
    out.draws["translation"] = to_json(-r.translation);
  } else if (op == "flip") {
    params.flip_prob_per_horizontal_axis = p.at("prob").get<double>();
    auto r = random_flip(cloud, rng, params);
    out.cloud = std::move(r.cloud);
    out.draws["flip_x"] = r.record.flipped[0];
    out.draws["flip_y"] = r.record.flipped[1];
  } else if (op == "rotate") {
    params.up_axis_rotation = interval(p.at("up"));
    params.tilt_rotation = interval(p.at("tilt"));
    auto r = random_rotate(cloud, rng, params);
    out.cloud = std::move(r.cloud);
    out.draws["angle"] = r.record.up_angle;
    out.draws["tilt_x"] = r.record.tilt[0];
    out.draws["tilt_y"] = r.record.tilt[1];
  } else if (op == "scale") {
    params.scale = interval(p.at("range"));
    auto r = random_scale(cloud, rng, params);
    out.cloud = std::move(r.cloud);
    out.draws["scale"] = r.record.scale;
  } else if (op == "subsample") {
    params.subsample_keep = interval(p.at("keep"));
    auto r = random_subsample(cloud, rng, params);
    out.cloud = std::move(r.cloud);
    out.draws["keep_ratio"] = r.record.keep_ratio;
  } else if (op == "elastic") {
    out.cloud = cloud;
    json passes = json::array();
    for (const json& pass : p.at("passes")) {
      auto r = elastic_distort(out.cloud, rng, pass.at(0).get<double>(), pass.at(1).get<double>());
      out.cloud = std::move(r.cloud);
      passes.push_back({{"granularity", r.record.granularity},
                        {"magnitude", r.record.magnitude},
                        {"grid", r.record.grid},
                        {"max_displacement", r.record.max_displacement}});
    }
    out.draws["passes"] = std::move(passes);
  } else if (op == "color") {
    if (!cloud.has_colors()) {
      out.cloud = cloud;
      out.skipped = true;
      out.note = "no colors";
      return out;
    }
    params.color_brightness = interval(p.at("brightness"));
    params.color_contrast = interval(p.at("contrast"));
    params.color_jitter_sigma = p.at("jitter_sigma").get<double>();
    auto r = color_augment(cloud, rng, params);
    out.cloud = std::move(r.cloud);
    out.draws["brightness"] = r.record.brightness;
    out.draws["contrast"] = r.record.contrast;
  } else if (op == "voxelize") {
    out.cloud = voxelize(cloud, p.at("cell").get<double>());
  } else if (op == "cutout") {
    CutoutSpec spec;
    spec.edge_range = interval(p.at("edge_range"));
    spec.cuts_per_10k = p.at("cuts_per_10k").get<double>();
    CutoutResult r = cutout(cloud, spec, rng);
    out.cloud = std::move(r.cloud);
    json boxes = json::array();
    for (const Aabb& b : r.boxes) boxes.push_back(box_json(b));
    out.draws["boxes"] = std::move(boxes);
    out.draws["removed"] = r.removed;
  } else if (op == "noise_near_surface") {
    out.cloud = noise_near_surface(cloud, rng, p.at("fraction").get<double>(), p.at("radius").get<double>(),
                                   ctx.ignore_label);
    out.draws["added"] = out.cloud.size() - cloud.size();
  } else if (op == "noise_uniform") {
    out.cloud = noise_uniform(cloud, rng, p.at("cell").get<double>(), p.at("offset").get<double>(), ctx.ignore_label);
    out.draws["added"] = out.cloud.size() - cloud.size();
  } else if (op == "crop_cube") {
    CropResult r = crop_cube_fraction(cloud, p.at("fraction").get<double>(), rng);
    out.cloud = std::move(r.cloud);
    out.draws["box"] = box_json(r.box);
    out.draws["attempts"] = r.attempts;
  } else if (op == "crop_sphere") {
    SphereCropResult r = crop_sphere(cloud, rng, p.at("radius").get<double>());
    out.cloud = std::move(r.cloud);
    out.draws["center"] = to_json(r.center);
  } else if (op == "mix_instances") {
    if (!ctx.instance_dbs) throw Error(ErrorCode::kInvalidArgument, "mix_instances needs an instance database cache");
    const auto db = ctx.instance_dbs->get(p.at("db").get<std::string>());
    const auto placement = p.at("placement").get<std::string>() == "free" ? InstancePlacement::kFree
                                                                          : InstancePlacement::kOverlapping;
    InstanceMixResult r = mix_instances(cloud, *db, p.at("ratio").get<double>(), placement, rng);
    out.cloud = std::move(r.cloud);
    out.draws["entries"] = r.entries;
    json positions = json::array();
    for (const Vec3& v : r.positions) positions.push_back(to_json(v));
    out.draws["positions"] = std::move(positions);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown chain op '" + op + "'");
  }
  return out;
}

RngStream step_stream(std::uint64_t master_seed, std::uint64_t scene, std::uint64_t epoch, std::size_t index,
                      const std::string& op) {
  return derive_stream(master_seed, scene, epoch, "chain/" + std::to_string(index) + "/" + op);
}

ChainResult run_chain(const std::vector<ChainStep>& chain, const PointCloud& cloud, std::uint64_t master_seed,
                      std::uint64_t scene, std::uint64_t epoch, const StepContext& ctx) {
  ChainResult result{cloud, {}};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const ChainStep& step = chain[i];
    RngStream rng = step_stream(master_seed, scene, epoch, i, step.op);
    const auto start = std::chrono::steady_clock::now();
    StepOutcome outcome = apply_step(step, result.cloud, rng, ctx);
    const auto stop = std::chrono::steady_clock::now();

    StepTrace trace;
    trace.op = step.op;
    trace.seed = rng.path();
    trace.params = step.params;
    trace.draws = std::move(outcome.draws);
    trace.raw_draws = rng.draws();
    trace.points_before = result.cloud.size();
    trace.points_after = outcome.cloud.size();
    trace.skipped = outcome.skipped;
    trace.note = std::move(outcome.note);
    trace.seconds = std::chrono::duration<double>(stop - start).count();
    result.steps.push_back(std::move(trace));
    result.cloud = std::move(outcome.cloud);
  }
  return result;
}

}  // namespace scenemix::pipeline
