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

#include <algorithm>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "scenemix/error.hpp"
#include "scenemix/mixing.hpp"
#include "scenemix/transforms.hpp"
#include "support/synthetic.hpp"

namespace scenemix {
namespace {

PointCloud centered_scene(RngStream& rng, std::size_t n) {
  return center_at_origin(testing::random_scene(rng, {.points = n})).cloud;
}

std::vector<PointCloud> scenes(std::uint64_t seed, std::size_t count, std::size_t n = 200) {
  RngStream rng = derive_stream(seed, 0, 0, "scenes");
  std::vector<PointCloud> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(centered_scene(rng, n + 10 * i));
  return out;
}

std::size_t total_points(std::span<const PointCloud> clouds) {
  std::size_t n = 0;
  for (const PointCloud& c : clouds) n += c.size();
  return n;
}

TEST(MixTest, ConcatenatesLabelsAndProvenance) {
  const auto s = scenes(1, 2);
  RngStream rng = derive_stream(1, 0, 0, "mix");
  const MixedSample m = mix(s[0], s[1], Overlap{}, rng);
  ASSERT_EQ(m.cloud.size(), s[0].size() + s[1].size());
  std::vector<std::uint32_t> expected = *s[0].labels;
  expected.insert(expected.end(), s[1].labels->begin(), s[1].labels->end());
  EXPECT_EQ(*m.cloud.labels, expected);
  EXPECT_EQ(std::count(m.provenance.begin(), m.provenance.end(), 1u), static_cast<long>(s[1].size()));
  EXPECT_EQ(m.provenance.front(), 0u);
  EXPECT_EQ(m.placement, "overlap");
  EXPECT_FALSE(m.direction.has_value());
}

TEST(MixTest, OverlapBoxesIntersect) {
  const auto s = scenes(2, 2);
  RngStream rng = derive_stream(2, 0, 0, "mix");
  const MixedSample m = mix(s[0], s[1], Overlap{}, rng);
  std::vector<bool> first(m.cloud.size());
  for (std::size_t i = 0; i < first.size(); ++i) first[i] = m.provenance[i] == 0;
  std::vector<bool> second(first.size());
  std::transform(first.begin(), first.end(), second.begin(), [](bool b) { return !b; });
  EXPECT_GT(intersection_volume(aabb_of(m.cloud.filter(first)), aabb_of(m.cloud.filter(second))), 0.0);
}

TEST(MixTest, NearbyGapWithinSlack) {
  const auto s = scenes(3, 2);
  RngStream rng = derive_stream(3, 0, 0, "mix");
  for (double gap : {0.0, 0.1, 2.5}) {
    for (int t = 0; t < 20; ++t) {
      const MixedSample m = mix(s[0], s[1], NearbyNoOverlap{gap}, rng);
      const Aabb a = aabb_of(s[0]);
      const Aabb b = aabb_of(s[1]).translated(m.offsets[1]);
      EXPECT_FALSE(intersects(a, b));
      EXPECT_GE(box_distance(a, b), gap);
      EXPECT_LE(box_distance(a, b), gap + kNearbyGapSlack);
      EXPECT_NEAR(m.offsets[1].z(), 0.0, 1e-12);
      EXPECT_DOUBLE_EQ(*m.gap, box_distance(a, b));
    }
  }
}

TEST(MixTest, FarApartExactDistance) {
  const auto s = scenes(4, 2);
  RngStream rng = derive_stream(4, 0, 0, "mix");
  const MixedSample m = mix(s[0], s[1], FarApart{500.0}, rng);
  EXPECT_NEAR(m.offsets[1].norm(), 500.0, 1e-9);
  EXPECT_FALSE(intersects(aabb_of(s[0]), aabb_of(s[1]).translated(m.offsets[1])));
}

TEST(MixTest, FarApartTooCloseIsInfeasible) {
  const auto s = scenes(5, 2);
  RngStream rng = derive_stream(5, 0, 0, "mix");
  try {
    mix(s[0], s[1], FarApart{0.01}, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPlacementInfeasible);
  }
}

TEST(MixTest, EmptySceneRejected) {
  const auto s = scenes(6, 1);
  RngStream rng = derive_stream(6, 0, 0, "mix");
  EXPECT_THROW(mix(s[0], PointCloud{}, Overlap{}, rng), Error);
}

TEST(MixKTest, AcceptsSeveralCounts) {
  const auto s = scenes(7, 8, 50);
  RngStream rng = derive_stream(7, 0, 0, "mixk");
  for (std::size_t k : {1, 2, 3, 4, 7, 8}) {
    const std::span<const PointCloud> group(s.data(), k);
    const MixedSample m = mix_k(group, rng);
    EXPECT_EQ(m.cloud.size(), total_points(group));
    EXPECT_EQ(std::set<std::uint32_t>(m.provenance.begin(), m.provenance.end()).size(), k);
  }
  EXPECT_EQ(mix_k(std::span<const PointCloud>(s.data(), 1), rng).cloud, s[0]);
  EXPECT_THROW(mix_k({}, rng), Error);
}

TEST(MixUnlabeledTest, OnlyFirstSceneSupervised) {
  const auto s = scenes(8, 2);
  RngStream rng = derive_stream(8, 0, 0, "unl");
  const MixedSample m = mix_unlabeled(s[0], s[1], 255, rng);
  EXPECT_EQ(static_cast<std::size_t>(std::count(m.cloud.loss_mask.begin(), m.cloud.loss_mask.end(), true)),
            s[0].size());
  for (std::size_t i = s[0].size(); i < m.cloud.size(); ++i) {
    ASSERT_EQ((*m.cloud.labels)[i], 255u);
    ASSERT_EQ((*m.cloud.instances)[i], kNoInstance);
  }
  EXPECT_TRUE(m.unlabeled_second);
  EXPECT_THROW(mix_unlabeled(make_cloud({Vec3(0, 0, 0)}), s[1], 255, rng), Error);
}

TEST(ComposeTest, SixScenesMakeThreePairs) {
  const auto s = scenes(9, 6);
  const ComposedBatch b = compose_batch(s, MixPolicy{}, derive_stream(9, 0, 0, "compose"));
  ASSERT_EQ(b.samples.size(), 3u);
  std::size_t total = 0;
  for (std::size_t g = 0; g < 3; ++g) {
    EXPECT_EQ(b.samples[g].sources, (std::vector<std::size_t>{2 * g, 2 * g + 1}));
    total += b.samples[g].cloud.size();
  }
  EXPECT_EQ(total, total_points(s));
  EXPECT_TRUE(b.dropped.empty());
}

TEST(ComposeTest, LeftoverSceneEmittedUnmixedWithWarning) {
  const auto s = scenes(10, 5);
  const ComposedBatch b = compose_batch(s, MixPolicy{}, derive_stream(10, 0, 0, "compose"));
  ASSERT_EQ(b.samples.size(), 3u);
  EXPECT_TRUE(b.samples.back().unmixed);
  EXPECT_FALSE(b.samples.back().warning.empty());
  EXPECT_EQ(b.samples.back().cloud, s[4]);
}

TEST(ComposeTest, ShortGroupMixedWithWarning) {
  const auto s = scenes(11, 5);
  MixPolicy policy;
  policy.scene_count = 3;
  const ComposedBatch b = compose_batch(s, policy, derive_stream(11, 0, 0, "compose"));
  ASSERT_EQ(b.samples.size(), 2u);
  EXPECT_EQ(b.samples[1].sources.size(), 2u);
  EXPECT_FALSE(b.samples[1].warning.empty());
}

TEST(ComposeTest, NonMixedRatio) {
  const auto s = scenes(12, 10);
  MixPolicy policy;
  policy.non_mixed_ratio = 0.4;
  const ComposedBatch b = compose_batch(s, policy, derive_stream(12, 0, 0, "compose"));
  const auto unmixed = std::count_if(b.samples.begin(), b.samples.end(), [](const MixedSample& m) { return m.unmixed; });
  EXPECT_EQ(unmixed, 4);
  EXPECT_EQ(b.samples.size(), 7u);
  std::size_t total = 0;
  for (const auto& m : b.samples) total += m.cloud.size();
  EXPECT_EQ(total, total_points(s));
  policy.non_mixed_ratio = 1.0;
  EXPECT_EQ(compose_batch(s, policy, derive_stream(12, 0, 0, "compose")).samples.size(), 10u);
}

TEST(ComposeTest, PointBudgetDropsTail) {
  const auto s = scenes(13, 6, 100);
  MixPolicy policy;
  policy.point_budget = s[0].size() + s[1].size() + s[2].size() + s[3].size();
  const ComposedBatch b = compose_batch(s, policy, derive_stream(13, 0, 0, "compose"));
  ASSERT_EQ(b.samples.size(), 2u);
  ASSERT_EQ(b.dropped.size(), 1u);
  EXPECT_EQ(b.dropped[0], (std::vector<std::size_t>{4, 5}));
}

TEST(ComposeTest, WorkerCountDoesNotChangeResult) {
  const auto s = scenes(14, 12);
  MixPolicy policy;
  policy.placement = NearbyNoOverlap{0.2};
  policy.non_mixed_ratio = 0.25;
  const RngStream rng = derive_stream(14, 0, 0, "compose");
  const ComposedBatch one = compose_batch(s, policy, rng, 1);
  const ComposedBatch many = compose_batch(s, policy, rng, 8);
  ASSERT_EQ(one.samples.size(), many.samples.size());
  for (std::size_t i = 0; i < one.samples.size(); ++i) {
    EXPECT_EQ(one.samples[i].cloud, many.samples[i].cloud);
    EXPECT_EQ(one.samples[i].seed, many.samples[i].seed);
  }
}

TEST(ComposeTest, MixGroupReplaysComposedSample) {
  const auto s = scenes(15, 4);
  MixPolicy policy;
  policy.placement = FarApart{100.0};
  const ComposedBatch b = compose_batch(s, policy, derive_stream(15, 0, 0, "compose"));
  for (const MixedSample& m : b.samples) {
    std::vector<PointCloud> members;
    for (std::size_t i : m.sources) members.push_back(s[i]);
    RngStream rng(m.seed);
    EXPECT_EQ(mix_group(members, policy, rng).cloud, m.cloud);
  }
}

TEST(PolicyTest, Validation) {
  MixPolicy p;
  EXPECT_NO_THROW(p.validate());
  p.placement = NearbyNoOverlap{0.1};
  p.scene_count = 3;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.non_mixed_ratio = 1.5;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.scene_count = 0;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_THROW(compose_batch({}, MixPolicy{}, derive_stream(0, 0, 0, "x")), Error);
}

TEST(ExamplesTest, SmallOverlapMix) {
  PointCloud a = make_cloud({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 1)});
  a.labels = std::vector<std::uint32_t>{1, 1, 2, 2, 3};
  a.reset_loss_mask();
  PointCloud b = make_cloud({Vec3(0.5, 0.5, 0.5), Vec3(2, 0, 0), Vec3(0, 2, 0)});
  b.labels = std::vector<std::uint32_t>{7, 8, 9};
  b.reset_loss_mask();
  RngStream rng = derive_stream(30, 0, 0, "mix");
  const MixedSample m = mix(a, b, Overlap{}, rng);
  EXPECT_EQ(*m.cloud.labels, (std::vector<std::uint32_t>{1, 1, 2, 2, 3, 7, 8, 9}));
}

TEST(ExamplesTest, MixKOfTwoMatchesMix) {
  const auto s = scenes(31, 2);
  RngStream r1 = derive_stream(31, 0, 0, "same");
  RngStream r2 = derive_stream(31, 0, 0, "same");
  EXPECT_EQ(mix_k(s, r1).cloud, mix(s[0], s[1], Overlap{}, r2).cloud);
  const auto eight = scenes(32, 8, 30);
  RngStream r3 = derive_stream(32, 0, 0, "k8");
  const MixedSample m = mix_k(eight, r3);
  std::size_t pos = 0;
  for (std::uint32_t part = 0; part < 8; ++part) {
    for (std::size_t i = 0; i < eight[part].size(); ++i) ASSERT_EQ(m.provenance[pos++], part);
  }
}

TEST(ExamplesTest, FarApartNearestPair) {
  RngStream rng = derive_stream(33, 0, 0, "far");
  const PointCloud a = centered_scene(rng, 150);
  const PointCloud b = centered_scene(rng, 150);
  const MixedSample m = mix(a, b, FarApart{100.0}, rng);
  double radius_a = 0.0, radius_b = 0.0;
  for (const Vec3& p : a.positions) radius_a = std::max(radius_a, p.norm());
  for (const Vec3& p : b.positions) radius_b = std::max(radius_b, p.norm());
  double nearest = 1e300;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = a.size(); j < m.cloud.size(); ++j) {
      nearest = std::min(nearest, (m.cloud.positions[i] - m.cloud.positions[j]).norm());
    }
  }
  EXPECT_GE(nearest, 100.0 - (radius_a + radius_b));
}

TEST(ExamplesTest, UnlabeledSmall) {
  PointCloud a = make_cloud({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)});
  a.labels = std::vector<std::uint32_t>{1, 2, 3, 4};
  a.reset_loss_mask();
  const PointCloud b = make_cloud({Vec3(0, 1, 0), Vec3(1, 1, 0), Vec3(2, 1, 0), Vec3(3, 1, 0), Vec3(4, 1, 0), Vec3(5, 1, 0)});
  RngStream rng = derive_stream(34, 0, 0, "unl");
  const MixedSample m = mix_unlabeled(a, b, 255, rng);
  std::vector<Vec3> supervised;
  for (std::size_t i = 0; i < m.cloud.size(); ++i) {
    if (m.cloud.loss_mask[i]) supervised.push_back(m.cloud.positions[i]);
  }
  EXPECT_EQ(supervised, a.positions);
  EXPECT_EQ(std::count(m.cloud.labels->begin(), m.cloud.labels->end(), 255u), 6);
}

TEST(ExamplesTest, TenEntriesFifthUnmixed) {
  const auto s = scenes(35, 10);
  MixPolicy policy;
  policy.non_mixed_ratio = 0.2;
  const ComposedBatch b = compose_batch(s, policy, derive_stream(35, 0, 0, "compose"));
  EXPECT_EQ(std::count_if(b.samples.begin(), b.samples.end(), [](const MixedSample& m) { return m.unmixed; }), 2);
}

}  // namespace
}  // namespace scenemix
