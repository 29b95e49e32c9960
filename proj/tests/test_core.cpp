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
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "scenemix/augment_params.hpp"
#include "scenemix/error.hpp"
#include "scenemix/point_cloud.hpp"
#include "scenemix/rng.hpp"
#include "support/synthetic.hpp"

namespace scenemix {
namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

// Interval overlap on one axis, written independently of the library.
double overlap_1d(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

TEST(ErrorTest, MessageCarriesCode) {
  const Error e(ErrorCode::kEmptyCloud, "nothing here");
  EXPECT_EQ(e.code(), ErrorCode::kEmptyCloud);
  EXPECT_NE(std::string(e.what()).find("nothing here"), std::string::npos);
  const LineError le(ErrorCode::kParseError, 7, "bad");
  EXPECT_EQ(le.line(), 7u);
  const ConfigError ce("chain[2].range", "reversed");
  EXPECT_EQ(ce.path(), "chain[2].range");
  EXPECT_EQ(ce.code(), ErrorCode::kConfigError);
}

TEST(PointCloudTest, CheckDetectsMisalignedArrays) {
  PointCloud cloud = make_cloud({Vec3(0, 0, 0), Vec3(1, 1, 1)});
  EXPECT_NO_THROW(cloud.check());
  cloud.labels = std::vector<std::uint32_t>{1};
  EXPECT_EQ(code_of([&] { cloud.check(); }), ErrorCode::kAttributeMismatch);
}

TEST(PointCloudTest, LossMaskDefaults) {
  PointCloud cloud = make_cloud({Vec3(0, 0, 0), Vec3(1, 0, 0)});
  cloud.reset_loss_mask();
  EXPECT_EQ(cloud.loss_mask, (std::vector<bool>{false, false}));
  cloud.labels = std::vector<std::uint32_t>{3, 4};
  cloud.reset_loss_mask();
  EXPECT_EQ(cloud.loss_mask, (std::vector<bool>{true, true}));
}

TEST(PointCloudTest, SelectAndFilterKeepArraysAligned) {
  RngStream rng = derive_stream(1, 0, 0, "select");
  const PointCloud cloud = testing::random_scene(rng, {.points = 50});
  const std::vector<std::size_t> idx{4, 0, 49, 4};
  const PointCloud picked = cloud.select(idx);
  ASSERT_EQ(picked.size(), 4u);
  picked.check();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    EXPECT_EQ(picked.positions[i], cloud.positions[idx[i]]);
    EXPECT_EQ((*picked.labels)[i], (*cloud.labels)[idx[i]]);
    EXPECT_EQ((*picked.colors)[i], (*cloud.colors)[idx[i]]);
  }
  std::vector<bool> keep(cloud.size());
  for (std::size_t i = 0; i < keep.size(); i += 3) keep[i] = true;
  const PointCloud kept = cloud.filter(keep);
  EXPECT_EQ(kept.size(), 17u);
  EXPECT_EQ(kept.positions[1], cloud.positions[3]);
}

TEST(AabbTest, IntersectionVolumeMatchesPerAxisOverlap) {
  RngStream rng = derive_stream(2, 0, 0, "aabb");
  for (int trial = 0; trial < 500; ++trial) {
    Aabb a, b;
    for (int k = 0; k < 3; ++k) {
      const double a0 = rng.uniform(-2, 2), b0 = rng.uniform(-2, 2);
      a.min_corner[k] = a0;
      a.max_corner[k] = a0 + rng.uniform(0, 2);
      b.min_corner[k] = b0;
      b.max_corner[k] = b0 + rng.uniform(0, 2);
    }
    double expected = 1.0;
    for (int k = 0; k < 3; ++k) expected *= overlap_1d(a.min_corner[k], a.max_corner[k], b.min_corner[k], b.max_corner[k]);
    EXPECT_NEAR(intersection_volume(a, b), expected, 1e-12);
    EXPECT_DOUBLE_EQ(intersection_volume(a, b), intersection_volume(b, a));
  }
}

TEST(AabbTest, TouchingBoxesIntersectWithZeroVolume) {
  const Aabb a{Vec3(0, 0, 0), Vec3(1, 1, 1)};
  const Aabb b{Vec3(1, 0, 0), Vec3(2, 1, 1)};
  EXPECT_TRUE(intersects(a, b));
  EXPECT_EQ(intersection_volume(a, b), 0.0);
  EXPECT_EQ(box_distance(a, b), 0.0);
  EXPECT_DOUBLE_EQ(box_distance(a, Aabb{Vec3(4, 5, 0), Vec3(5, 6, 1)}), 5.0);
}

TEST(AabbTest, BoxDistanceMatchesPerAxisGaps) {
  RngStream rng = derive_stream(4, 0, 0, "dist");
  for (int trial = 0; trial < 500; ++trial) {
    Aabb a, b;
    double sq = 0.0;
    for (int k = 0; k < 3; ++k) {
      a.min_corner[k] = rng.uniform(-3, 3);
      a.max_corner[k] = a.min_corner[k] + rng.uniform(0, 2);
      b.min_corner[k] = rng.uniform(-3, 3);
      b.max_corner[k] = b.min_corner[k] + rng.uniform(0, 2);
      const double gap = std::max({0.0, b.min_corner[k] - a.max_corner[k], a.min_corner[k] - b.max_corner[k]});
      sq += gap * gap;
    }
    EXPECT_NEAR(box_distance(a, b), std::sqrt(sq), 1e-12);
    EXPECT_EQ(box_distance(a, b) == 0.0, intersects(a, b));
  }
}

TEST(AabbTest, EmptyCloudHasNoBox) {
  EXPECT_EQ(code_of([] { aabb_of(PointCloud{}); }), ErrorCode::kEmptyCloud);
  EXPECT_EQ(code_of([] { centroid(PointCloud{}); }), ErrorCode::kEmptyCloud);
}

TEST(ConcatTest, AppendsInOrder) {
  RngStream rng = derive_stream(3, 0, 0, "concat");
  const PointCloud a = testing::random_scene(rng, {.points = 10});
  const PointCloud b = testing::random_scene(rng, {.points = 7});
  const std::vector<PointCloud> parts{a, b};
  const PointCloud ab = concat(parts);
  ASSERT_EQ(ab.size(), 17u);
  ab.check();
  EXPECT_TRUE(std::equal(a.positions.begin(), a.positions.end(), ab.positions.begin()));
  EXPECT_EQ(ab.positions[10], b.positions[0]);
}

TEST(ConcatTest, MismatchedLabelsNeedAFill) {
  PointCloud a = make_cloud({Vec3(0, 0, 0)});
  a.labels = std::vector<std::uint32_t>{1};
  a.reset_loss_mask();
  const PointCloud b = make_cloud({Vec3(1, 1, 1)});
  const std::vector<PointCloud> parts{a, b};
  EXPECT_EQ(code_of([&] { concat(parts); }), ErrorCode::kAttributeMismatch);
  const PointCloud filled = concat(parts, {.label_fill = 255u, .instance_fill = {}});
  EXPECT_EQ(*filled.labels, (std::vector<std::uint32_t>{1, 255}));
  EXPECT_EQ(filled.loss_mask, (std::vector<bool>{true, false}));
}

TEST(RngTest, SamePathSameSequence) {
  RngStream a = derive_stream(42, 3, 1, "rotate");
  RngStream b = derive_stream(42, 3, 1, "rotate");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(a.draws(), 100u);
}

TEST(RngTest, PathComponentsAllMatter) {
  const auto first = [](RngStream s) { return s.next_u64(); };
  const std::set<std::uint64_t> values{first(derive_stream(1, 0, 0, "x")), first(derive_stream(2, 0, 0, "x")),
                                       first(derive_stream(1, 1, 0, "x")), first(derive_stream(1, 0, 1, "x")),
                                       first(derive_stream(1, 0, 0, "y"))};
  EXPECT_EQ(values.size(), 5u);
}

TEST(RngTest, ChildIgnoresParentProgress) {
  RngStream parent = derive_stream(5, 0, 0, "p");
  const std::uint64_t before = parent.child("c").next_u64();
  for (int i = 0; i < 10; ++i) parent.next_u64();
  EXPECT_EQ(parent.child("c").next_u64(), before);
  EXPECT_EQ(parent.child("c").path().tag, "p/c");
}

TEST(RngTest, UniformStaysInHalfOpenRange) {
  RngStream rng = derive_stream(6, 0, 0, "u");
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.uniform(0.9, 1.1);
    ASSERT_GE(v, 0.9);
    ASSERT_LT(v, 1.1);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  EXPECT_NEAR(sum / n, 1.0, 1e-3);
  EXPECT_LT(lo, 0.9005);
  EXPECT_GT(hi, 1.0995);
  EXPECT_EQ(rng.uniform(2.0, 2.0), 2.0);
}

TEST(RngTest, IndexIsRoughlyUniform) {
  RngStream rng = derive_stream(7, 0, 0, "i");
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[rng.index(7)];
  for (int c : counts) EXPECT_NEAR(c, n / 7, 400);  // ~4.5 sigma
  EXPECT_EQ(code_of([&] { rng.index(0); }), ErrorCode::kInvalidArgument);
}

TEST(RngTest, NormalMoments) {
  RngStream rng = derive_stream(8, 0, 0, "n");
  double sum = 0.0, sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(RngTest, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xAF63DC4C8601EC8CULL);
}

TEST(AugmentParamsTest, DefaultsValidate) {
  EXPECT_NO_THROW(AugmentParams{}.validate());
  EXPECT_NO_THROW(AugmentParams::identity().validate());
}

TEST(AugmentParamsTest, RejectsBadRanges) {
  AugmentParams p;
  p.scale = {1.2, 0.9};
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::kInvalidArgument);
  p = {};
  p.tilt_rotation = {-1.0, 1.0};
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::kInvalidArgument);
  p = {};
  p.flip_prob_per_horizontal_axis = 1.5;
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::kInvalidArgument);
}

TEST(ExamplesTest, CentroidAndBox) {
  EXPECT_EQ(centroid(make_cloud({Vec3(0, 0, 0), Vec3(2, 0, 0)})), Vec3(1, 0, 0));
  EXPECT_EQ(centroid(make_cloud({Vec3(5, 5, 5)})), Vec3(5, 5, 5));
  const Aabb box = aabb_of(make_cloud({Vec3(0, 0, 0), Vec3(1, 2, 3)}));
  EXPECT_EQ(box.min_corner, Vec3(0, 0, 0));
  EXPECT_EQ(box.max_corner, Vec3(1, 2, 3));
  const Aabb point = aabb_of(make_cloud({Vec3(1, 1, 1)}));
  EXPECT_EQ(point.min_corner, point.max_corner);

  RngStream rng = derive_stream(20, 0, 0, "cube");
  std::vector<Vec3> pts;
  Vec3 sum = Vec3::Zero();
  for (int i = 0; i < 1000; ++i) {
    pts.emplace_back(rng.uniform01(), rng.uniform01(), rng.uniform01());
    sum += pts.back();
  }
  const Vec3 c = centroid(make_cloud(pts));
  EXPECT_LT((c - sum / 1000.0).norm(), 1e-12);
  EXPECT_LT((c - Vec3(0.5, 0.5, 0.5)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(ExamplesTest, ConcatSmall) {
  PointCloud a = make_cloud({Vec3(0, 0, 0), Vec3(1, 0, 0)});
  a.labels = std::vector<std::uint32_t>{1, 2};
  a.reset_loss_mask();
  PointCloud b = make_cloud({Vec3(2, 0, 0)});
  b.labels = std::vector<std::uint32_t>{3};
  b.reset_loss_mask();
  const std::vector<PointCloud> parts{a, b};
  EXPECT_EQ(*concat(parts).labels, (std::vector<std::uint32_t>{1, 2, 3}));
  const std::vector<PointCloud> single{a};
  EXPECT_EQ(concat(single), a);
}

TEST(RngTest, DistinctTagsGiveDistinctStreams) {
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 10000; ++i) firsts.insert(derive_stream(9, 0, 0, "op" + std::to_string(i)).next_u64());
  EXPECT_EQ(firsts.size(), 10000u);
}

}  // namespace
}  // namespace scenemix
