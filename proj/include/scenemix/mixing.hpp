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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "scenemix/point_cloud.hpp"
#include "scenemix/rng.hpp"

namespace scenemix {

/// Both scenes stay centered at the origin and overlap.
struct Overlap {
  bool operator==(const Overlap&) const = default;
};

/// The second scene is pushed along a random horizontal direction until the
/// bounding boxes are `gap` (+ at most kNearbyGapSlack) apart.
struct NearbyNoOverlap {
  double gap = 0.0;
  bool operator==(const NearbyNoOverlap&) const = default;
};

/// The second scene is translated by exactly `distance` along a random
/// horizontal direction; the boxes must end up disjoint.
struct FarApart {
  double distance = 500.0;
  bool operator==(const FarApart&) const = default;
};

using Placement = std::variant<Overlap, NearbyNoOverlap, FarApart>;

inline constexpr double kNearbyGapSlack = 0.01;

std::string placement_name(const Placement& placement);

struct MixPolicy {
  Placement placement = Overlap{};
  std::size_t scene_count = 2;  // k
  bool unlabeled_second = false;
  double non_mixed_ratio = 0.0;
  std::optional<std::size_t> point_budget;  // max total points per batch
  std::uint32_t ignore_label = kDefaultIgnoreLabel;

  /// Throws kInvalidArgument. Non-overlap placements are only defined for k=2.
  void validate() const;
  bool operator==(const MixPolicy&) const = default;
};

struct MixedSample {
  PointCloud cloud;
  /// Index (within this sample) of the source scene each point came from.
  std::vector<std::uint32_t> provenance;
  /// Positions in the caller's scene sequence, one per source.
  std::vector<std::size_t> sources;
  /// Translation applied to each source.
  std::vector<Vec3> offsets;
  /// Horizontal direction angle drawn for nearby/far placement.
  std::optional<double> direction;
  /// Box-to-box distance achieved by a nearby placement.
  std::optional<double> gap;
  std::string placement = "overlap";
  bool unmixed = false;
  bool unlabeled_second = false;
  std::string warning;
  SeedPath seed;
};

MixedSample mix(const PointCloud& a, const PointCloud& b, const Placement& placement, RngStream& rng);

/// Overlapping union of all scenes. k=1 returns the scene unchanged.
MixedSample mix_k(std::span<const PointCloud> scenes, RngStream& rng);

/// Overlapping union where the second scene is unsupervised: its points get
/// `ignore_label`, instance kNoInstance and a false loss mask.
MixedSample mix_unlabeled(const PointCloud& labeled, const PointCloud& raw, std::uint32_t ignore_label,
                          RngStream& rng);

/// Mixes one group the way compose_batch() does: a single member passes
/// through, two members use the policy's placement, more overlap.
MixedSample mix_group(std::span<const PointCloud> members, const MixPolicy& policy, RngStream& rng);

struct ComposedBatch {
  std::vector<MixedSample> samples;
  /// Source groups left out because they would have exceeded the point budget.
  std::vector<std::vector<std::size_t>> dropped;
};

/**
 * Turns a batch of (already augmented) scenes into training samples.
 *
 * round(non_mixed_ratio * n) scenes, picked at random, pass through unmixed;
 * the rest are grouped in input order into groups of k and mixed. A leftover
 * single scene is emitted unmixed with a warning. When a point budget is set,
 * samples are emitted in order until the next one would exceed it; the rest
 * are reported in `dropped`. Group g mixes with rng.child("group<g>"), so the
 * result does not depend on `workers`.
 */
ComposedBatch compose_batch(std::span<const PointCloud> scenes, const MixPolicy& policy, const RngStream& rng,
                            std::size_t workers = 1);

}  // namespace scenemix
