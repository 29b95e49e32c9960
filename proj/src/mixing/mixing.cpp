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

#include "scenemix/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenemix/error.hpp"
#include "scenemix/parallel.hpp"

namespace scenemix {

namespace {

constexpr int kSearchIterations = 200;

Vec3 horizontal(double angle) { return Vec3(std::cos(angle), std::sin(angle), 0.0); }

// Union of already-placed parts. With `unlabeled_rest`, every part after the
// first loses its labels, instance ids and supervision.
MixedSample assemble(std::vector<PointCloud> parts, bool unlabeled_rest, std::uint32_t ignore_label) {
  ConcatOptions options;
  if (unlabeled_rest) {
    for (std::size_t i = 1; i < parts.size(); ++i) {
      parts[i].labels.reset();
      parts[i].instances.reset();
      parts[i].reset_loss_mask();
    }
    options.label_fill = ignore_label;
    options.instance_fill = kNoInstance;
  }

  MixedSample sample;
  sample.provenance.reserve([&] {
    std::size_t n = 0;
    for (const PointCloud& p : parts) n += p.size();
    return n;
  }());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    sample.provenance.insert(sample.provenance.end(), parts[i].size(), static_cast<std::uint32_t>(i));
  }
  sample.cloud = concat(parts, options);
  sample.unlabeled_second = unlabeled_rest;
  return sample;
}

// Translation along `dir` leaving the boxes `target` apart. The box distance
// is convex in the translation length, so the feasible set is an interval
// and its upper end is found by bisection.
double solve_gap(const Aabb& a, const Aabb& b, const Vec3& dir, double target) {
  const auto distance_at = [&](double t) { return box_distance(a, b.translated(t * dir)); };
  const double reach =
      a.extent().norm() + b.extent().norm() + (a.center() - b.center()).norm() + target + 1.0;

  double lo = -reach;
  double hi = reach;
  for (int i = 0; i < kSearchIterations; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (distance_at(m1) <= distance_at(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  double inside = 0.5 * (lo + hi);
  if (distance_at(inside) > target) {
    throw Error(ErrorCode::kPlacementInfeasible, "scenes cannot be brought within the requested gap");
  }
  double outside = reach;
  for (int i = 0; i < kSearchIterations; ++i) {
    const double mid = 0.5 * (inside + outside);
    if (distance_at(mid) <= target) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

MixedSample mix_placed(const PointCloud& a, const PointCloud& b, const Placement& placement, RngStream& rng,
                       bool unlabeled, std::uint32_t ignore_label) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kEmptyCloud, "cannot mix an empty scene");

  Vec3 offset = Vec3::Zero();
  std::optional<double> direction;
  std::optional<double> gap;

  if (const auto* nearby = std::get_if<NearbyNoOverlap>(&placement)) {
    direction = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Vec3 dir = horizontal(*direction);
    const Aabb box_a = aabb_of(a);
    const Aabb box_b = aabb_of(b);
    const double t = solve_gap(box_a, box_b, dir, nearby->gap + 0.5 * kNearbyGapSlack);
    offset = t * dir;
    gap = box_distance(box_a, box_b.translated(offset));
  } else if (const auto* far = std::get_if<FarApart>(&placement)) {
    direction = rng.uniform(0.0, 2.0 * std::numbers::pi);
    offset = far->distance * horizontal(*direction);
    if (intersects(aabb_of(a), aabb_of(b).translated(offset))) {
      throw Error(ErrorCode::kPlacementInfeasible,
                  "far-apart distance " + std::to_string(far->distance) + " m does not separate the scenes");
    }
  }

  std::vector<PointCloud> parts{a, offset.isZero(0.0) ? b : translate(b, offset)};
  MixedSample sample = assemble(std::move(parts), unlabeled, ignore_label);
  sample.offsets = {Vec3::Zero(), offset};
  sample.direction = direction;
  sample.gap = gap;
  sample.placement = placement_name(placement);
  sample.seed = rng.path();
  return sample;
}

}  // namespace

std::string placement_name(const Placement& placement) {
  switch (placement.index()) {
    case 0: return "overlap";
    case 1: return "nearby";
    default: return "far";
  }
}

void MixPolicy::validate() const {
  const auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (scene_count < 1) fail("scene count k must be at least 1");
  if (!(non_mixed_ratio >= 0.0 && non_mixed_ratio <= 1.0)) fail("non-mixed ratio must lie in [0, 1]");
  if (const auto* nearby = std::get_if<NearbyNoOverlap>(&placement); nearby && !(nearby->gap >= 0.0)) {
    fail("nearby gap must be non-negative");
  }
  if (const auto* far = std::get_if<FarApart>(&placement); far && !(far->distance > 0.0)) {
    fail("far-apart distance must be positive");
  }
  if (!std::holds_alternative<Overlap>(placement) && scene_count > 2) {
    fail("nearby and far-apart placement are defined for pairs only");
  }
}

MixedSample mix(const PointCloud& a, const PointCloud& b, const Placement& placement, RngStream& rng) {
  return mix_placed(a, b, placement, rng, false, kDefaultIgnoreLabel);
}

MixedSample mix_k(std::span<const PointCloud> scenes, RngStream& rng) {
  if (scenes.empty()) throw Error(ErrorCode::kEmptyBatch, "nothing to mix");
  if (scenes.size() == 2) return mix(scenes[0], scenes[1], Overlap{}, rng);
  MixedSample sample = assemble(std::vector<PointCloud>(scenes.begin(), scenes.end()), false, kDefaultIgnoreLabel);
  sample.offsets.assign(scenes.size(), Vec3::Zero());
  sample.seed = rng.path();
  return sample;
}

MixedSample mix_unlabeled(const PointCloud& labeled, const PointCloud& raw, std::uint32_t ignore_label,
                          RngStream& rng) {
  if (!labeled.has_labels()) throw Error(ErrorCode::kMissingAttribute, "the supervised scene needs labels");
  return mix_placed(labeled, raw, Overlap{}, rng, true, ignore_label);
}

MixedSample mix_group(std::span<const PointCloud> members, const MixPolicy& policy, RngStream& rng) {
  if (members.empty()) throw Error(ErrorCode::kEmptyBatch, "empty mixing group");
  if (members.size() == 1) {
    MixedSample sample;
    sample.cloud = members.front();
    sample.provenance.assign(sample.cloud.size(), 0);
    sample.offsets = {Vec3::Zero()};
    sample.seed = rng.path();
    return sample;
  }
  if (members.size() == 2) {
    return mix_placed(members[0], members[1], policy.placement, rng, policy.unlabeled_second, policy.ignore_label);
  }
  MixedSample sample = assemble(std::vector<PointCloud>(members.begin(), members.end()), policy.unlabeled_second,
                                policy.ignore_label);
  sample.offsets.assign(members.size(), Vec3::Zero());
  sample.seed = rng.path();
  return sample;
}

ComposedBatch compose_batch(std::span<const PointCloud> scenes, const MixPolicy& policy, const RngStream& rng,
                            std::size_t workers) {
  if (scenes.empty()) throw Error(ErrorCode::kEmptyBatch, "empty scene batch");
  policy.validate();
  const std::size_t n = scenes.size();
  const std::size_t k = policy.scene_count;

  const auto n_unmixed =
      std::min(n, static_cast<std::size_t>(std::llround(policy.non_mixed_ratio * static_cast<double>(n))));
  std::vector<bool> unmixed(n, n_unmixed == n);
  if (n_unmixed > 0 && n_unmixed < n) {
    RngStream pick = rng.child("unmixed");
    std::size_t needed = n_unmixed;
    for (std::size_t i = 0; i < n && needed > 0; ++i) {
      if (pick.index(n - i) < needed) {
        unmixed[i] = true;
        --needed;
      }
    }
  }

  struct Group {
    std::vector<std::size_t> sources;
    bool unmixed = false;
    std::string warning;
  };
  std::vector<Group> groups;
  Group pending;
  for (std::size_t i = 0; i < n; ++i) {
    if (unmixed[i]) {
      groups.push_back({{i}, true, {}});
      continue;
    }
    pending.sources.push_back(i);
    if (pending.sources.size() == k) {
      groups.push_back(std::move(pending));
      pending = {};
    }
  }
  if (pending.sources.size() == 1) {
    pending.unmixed = k > 1;
    pending.warning = k > 1 ? "unpaired scene emitted unmixed" : "";
    groups.push_back(std::move(pending));
  } else if (!pending.sources.empty()) {
    pending.warning = "short group of " + std::to_string(pending.sources.size()) + " scenes";
    groups.push_back(std::move(pending));
  }
  std::sort(groups.begin(), groups.end(),
            [](const Group& a, const Group& b) { return a.sources.front() < b.sources.front(); });

  std::vector<MixedSample> samples(groups.size());
  parallel_for(groups.size(), workers, [&](std::size_t g) {
    const Group& group = groups[g];
    RngStream stream = rng.child("group" + std::to_string(g));
    std::vector<PointCloud> members;
    for (std::size_t s : group.sources) members.push_back(scenes[s]);
    MixedSample sample = mix_group(members, policy, stream);
    sample.unmixed = group.unmixed;
    sample.sources = group.sources;
    sample.warning = group.warning;
    samples[g] = std::move(sample);
  });

  ComposedBatch batch;
  std::size_t total = 0;
  bool over_budget = false;
  for (MixedSample& sample : samples) {
    if (policy.point_budget && !over_budget && total + sample.cloud.size() > *policy.point_budget) {
      over_budget = true;
    }
    if (over_budget) {
      batch.dropped.push_back(sample.sources);
      continue;
    }
    total += sample.cloud.size();
    batch.samples.push_back(std::move(sample));
  }
  return batch;
}

}  // namespace scenemix
