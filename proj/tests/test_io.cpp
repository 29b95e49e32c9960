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

#include <cstring>
#include <string>

#include <gtest/gtest.h>

#include "scenemix/error.hpp"
#include "scenemix/io.hpp"
#include "support/synthetic.hpp"

namespace scenemix::io {
namespace {

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

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

PointCloud fuzz_cloud(RngStream& rng) {
  testing::SceneSpec spec;
  spec.points = 1 + rng.index(300);
  spec.colors = rng.bernoulli(0.5);
  spec.features = rng.bernoulli(0.5);
  spec.labels = rng.bernoulli(0.7);
  spec.instances = rng.bernoulli(0.5);
  spec.extent = rng.uniform(0.1, 100.0);
  return testing::random_scene(rng, spec);
}

TEST(PlyTest, AsciiRead) {
  const std::string text =
      "ply\nformat ascii 1.0\ncomment made by hand\nelement vertex 2\n"
      "property float x\nproperty float y\nproperty float z\n"
      "property uchar red\nproperty uchar green\nproperty uchar blue\nproperty int label\n"
      "element face 1\nproperty list uchar int vertex_indices\nend_header\n"
      "0 1 2 255 0 51 7\n-1.5 2.25 3 0 255 0 9\n3 0 1 1\n";
  const PointCloud cloud = read_ply(to_bytes(text));
  ASSERT_EQ(cloud.size(), 2u);
  EXPECT_EQ(cloud.positions[1], Vec3(-1.5, 2.25, 3.0));
  EXPECT_DOUBLE_EQ((*cloud.colors)[0].z(), 0.2);
  EXPECT_EQ(*cloud.labels, (std::vector<std::uint32_t>{7, 9}));
  EXPECT_EQ(cloud.loss_mask, (std::vector<bool>{true, true}));
}

TEST(PlyTest, BinaryRoundTripPreservesAttributes) {
  RngStream rng = derive_stream(11, 0, 0, "ply");
  PointCloud cloud = testing::random_scene(rng, {.points = 100, .features = true});
  for (Vec3& p : cloud.positions) p = p.cast<float>().cast<double>();
  const PointCloud back = read_ply(write_ply(cloud));
  EXPECT_EQ(back, cloud);
}

TEST(PlyTest, AsciiWriteReadsBack) {
  RngStream rng = derive_stream(12, 0, 0, "ply");
  PointCloud cloud = testing::random_scene(rng, {.points = 20});
  for (Vec3& p : cloud.positions) p = p.cast<float>().cast<double>();
  EXPECT_EQ(read_ply(write_ply(cloud, PlyEncoding::kAscii)), cloud);
}

TEST(PlyTest, NonDefaultLossMaskSurvives) {
  PointCloud cloud = make_cloud({Vec3(0, 0, 0), Vec3(1, 0, 0)});
  cloud.labels = std::vector<std::uint32_t>{1, 255};
  cloud.loss_mask = {true, false};
  EXPECT_EQ(read_ply(write_ply(cloud)).loss_mask, cloud.loss_mask);
}

TEST(PlyTest, HeaderErrors) {
  EXPECT_EQ(code_of([] { read_ply(to_bytes("not a ply\n")); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { read_ply(to_bytes("ply\nformat binary_big_endian 1.0\nelement vertex 0\nproperty float x\n"
                                            "property float y\nproperty float z\nend_header\n")); }),
            ErrorCode::kUnsupportedEncoding);
  EXPECT_EQ(code_of([] { read_ply(to_bytes("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n")); }),
            ErrorCode::kTruncated);
  EXPECT_EQ(code_of([] { read_ply(to_bytes("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"
                                            "property float y\nend_header\n1 2\n")); }),
            ErrorCode::kMissingProperty);
}

TEST(PlyTest, TruncatedBinaryPayload) {
  RngStream rng = derive_stream(13, 0, 0, "ply");
  Bytes bytes = write_ply(testing::random_scene(rng, {.points = 10}));
  bytes.resize(bytes.size() - 3);
  EXPECT_EQ(code_of([&] { read_ply(bytes); }), ErrorCode::kTruncated);
}

TEST(PlyTest, HeaderReportsLayout) {
  RngStream rng = derive_stream(14, 0, 0, "ply");
  const Bytes bytes = write_ply(testing::random_scene(rng, {.points = 10, .colors = false, .labels = false}));
  const PlyHeader header = parse_ply_header(bytes);
  EXPECT_EQ(header.point_count(), 10u);
  EXPECT_EQ(header.vertex()->record_size(), 12u);
  EXPECT_EQ(bytes.size(), header.header_bytes + 120u);
}

TEST(PlyTest, BinaryPayloadLayout) {
  const Bytes bytes = write_ply(make_cloud({Vec3(1, 2, 3)}));
  const PlyHeader header = parse_ply_header(bytes);
  ASSERT_EQ(bytes.size() - header.header_bytes, 12u);
  float xyz[3];
  std::memcpy(xyz, bytes.data() + header.header_bytes, 12);
  EXPECT_EQ(xyz[0], 1.0f);
  EXPECT_EQ(xyz[1], 2.0f);
  EXPECT_EQ(xyz[2], 3.0f);
  EXPECT_EQ(write_ply(make_cloud({Vec3(1, 2, 3)})), bytes);

  PointCloud colored = make_cloud({Vec3(1, 2, 3), Vec3(4, 5, 6)});
  colored.colors = std::vector<Vec3>{Vec3(1, 0, 0), Vec3(0, 1, 0)};
  EXPECT_EQ(parse_ply_header(write_ply(colored)).vertex()->record_size(), 15u);
  EXPECT_EQ(code_of([] { write_ply(PointCloud{}); }), ErrorCode::kEmptyCloud);
}

TEST(PlyTest, FuzzedReencodeIsByteIdentical) {
  RngStream rng = derive_stream(15, 0, 0, "fuzz");
  for (int i = 0; i < 200; ++i) {
    const Bytes once = write_ply(fuzz_cloud(rng));
    ASSERT_EQ(write_ply(read_ply(once)), once) << "case " << i;
  }
}

TEST(KittiTest, LabelPacking) {
  const PackedLabel p = PackedLabel::pack(40, 7);
  EXPECT_EQ(p.raw, (7u << 16) | 40u);
  EXPECT_EQ(p.semantic(), 40u);
  EXPECT_EQ(p.instance(), 7u);
  EXPECT_EQ(code_of([] { PackedLabel::pack(1u << 16, 0); }), ErrorCode::kInvalidArgument);
  RngStream rng = derive_stream(16, 0, 0, "pack");
  for (int i = 0; i < 1000; ++i) {
    const auto raw = static_cast<std::uint32_t>(rng.next_u64());
    const PackedLabel q{raw};
    EXPECT_EQ(PackedLabel::pack(q.semantic(), q.instance()).raw, raw);
  }
}

TEST(KittiTest, BinRoundTrip) {
  RngStream rng = derive_stream(17, 0, 0, "bin");
  PointCloud cloud = testing::random_scene(rng, {.points = 64, .colors = false, .features = true, .labels = false});
  for (Vec3& p : cloud.positions) p = p.cast<float>().cast<double>();
  const Bytes bytes = write_kitti_bin(cloud);
  EXPECT_EQ(bytes.size(), 64u * 16u);
  EXPECT_EQ(read_kitti_bin(bytes), cloud);
}

TEST(KittiTest, BinRejectsPartialRecord) {
  EXPECT_TRUE(read_kitti_bin(Bytes{}).empty());
  const Bytes bytes(17, 0);
  EXPECT_EQ(code_of([&] { read_kitti_bin(bytes); }), ErrorCode::kTruncated);
}

TEST(KittiTest, LabelCountMismatch) {
  const std::vector<std::uint32_t> labels{1, 2, 3};
  const Bytes bytes = write_kitti_labels(labels, {});
  EXPECT_EQ(code_of([&] { read_kitti_labels(bytes, 4); }), ErrorCode::kCountMismatch);
  const KittiLabels back = read_kitti_labels(bytes, 3);
  EXPECT_EQ(back.labels, labels);
  EXPECT_EQ(back.instances, (std::vector<std::uint32_t>{0, 0, 0}));
}

TEST(KittiTest, FuzzedReencodeIsByteIdentical) {
  RngStream rng = derive_stream(18, 0, 0, "fuzz");
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = rng.index(500);
    Bytes scan(16 * n);
    for (std::size_t b = 0; b < n * 4; ++b) {
      const float f = static_cast<float>(rng.uniform(-80.0, 80.0));
      std::memcpy(scan.data() + 4 * b, &f, 4);
    }
    ASSERT_EQ(write_kitti_bin(read_kitti_bin(scan)), scan);

    Bytes label(4 * n);
    for (std::size_t b = 0; b < label.size(); ++b) label[b] = static_cast<std::uint8_t>(rng.index(256));
    const KittiLabels l = read_kitti_labels(label, n);
    ASSERT_EQ(write_kitti_labels(l.labels, l.instances), label);
  }
}

TEST(XyzrgbTest, ParsesAndSkipsBlankLines) {
  const PointCloud cloud = read_xyzrgb_text("1 2 3 255 0 0\n\n  4,5,6,0,0,255\r\n");
  ASSERT_EQ(cloud.size(), 2u);
  EXPECT_EQ(cloud.positions[1], Vec3(4, 5, 6));
  EXPECT_EQ((*cloud.colors)[0], Vec3(1, 0, 0));
  EXPECT_FALSE(cloud.has_labels());
}

TEST(XyzrgbTest, BadLineReportsLineNumber) {
  try {
    read_xyzrgb_text("1 2 3 4 5 6\n1 2 x 4 5 6\n");
    FAIL() << "expected LineError";
  } catch (const LineError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
  }
  EXPECT_EQ(code_of([] { read_xyzrgb_text("1 2 3 4 5\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { read_xyzrgb_text("1 2 3 4 5 300\n"); }), ErrorCode::kParseError);
}

TEST(FilesTest, MissingFileIsIoError) {
  EXPECT_EQ(code_of([] { read_file("/nonexistent/scenemix/file.ply"); }), ErrorCode::kIo);
}

TEST(ExamplesTest, LiteralInputs) {
  const PointCloud two = read_ply(to_bytes("ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\n"
                                           "property float y\nproperty float z\nend_header\n0 0 0\n1 1 1\n"));
  EXPECT_EQ(two.positions, (std::vector<Vec3>{Vec3(0, 0, 0), Vec3(1, 1, 1)}));

  Bytes record(16);
  const float values[4] = {1.0f, 2.0f, 3.0f, 0.5f};
  std::memcpy(record.data(), values, 16);
  const PointCloud one = read_kitti_bin(record);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.positions[0], Vec3(1, 2, 3));
  EXPECT_EQ((*one.features)[0], 0.5);

  EXPECT_EQ(PackedLabel{0x0001000Au}.semantic(), 10u);
  EXPECT_EQ(PackedLabel{0x0001000Au}.instance(), 1u);
  EXPECT_EQ(PackedLabel{0}.semantic(), 0u);
  EXPECT_EQ(PackedLabel{0}.instance(), 0u);

  const PointCloud red = read_xyzrgb_text("0 0 0 255 0 0");
  EXPECT_EQ((*red.colors)[0], Vec3(1, 0, 0));
  try {
    read_xyzrgb_text("0 0 x 1 2 3");
    FAIL();
  } catch (const LineError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

}  // namespace
}  // namespace scenemix::io
