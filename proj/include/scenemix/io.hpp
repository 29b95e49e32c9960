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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenemix/point_cloud.hpp"

namespace scenemix::io {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// ---------------------------------------------------------------------------
// PLY
// ---------------------------------------------------------------------------

enum class PlyEncoding { kAscii, kBinaryLittleEndian };

enum class PlyScalar { kInt8, kUInt8, kInt16, kUInt16, kInt32, kUInt32, kFloat32, kFloat64 };

std::size_t scalar_size(PlyScalar kind);

struct PlyProperty {
  std::string name;
  PlyScalar kind = PlyScalar::kFloat32;
  bool is_list = false;
  PlyScalar count_kind = PlyScalar::kUInt8;  // list length type, lists only
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;

  /// Bytes per binary record; 0 when the element has list properties.
  std::size_t record_size() const;
};

struct PlyHeader {
  PlyEncoding encoding = PlyEncoding::kBinaryLittleEndian;
  std::vector<PlyElement> elements;
  std::size_t header_bytes = 0;  // offset of the payload

  const PlyElement* vertex() const;
  /// Vertex count, 0 without a vertex element.
  std::size_t point_count() const;
};

/// Parses the header only. Throws kParseError, kUnsupportedEncoding or
/// kMissingProperty (no vertex element, or vertex lacks x/y/z).
PlyHeader parse_ply_header(ByteView bytes);

/**
 * Reads the vertex element of a PLY file.
 *
 * x/y/z become positions; red/green/blue become colors (integer kinds are
 * divided by 255); `label`, `instance`, `reflectance` and `loss_mask` fill the
 * matching arrays. Other properties and other elements are skipped.
 */
PointCloud read_ply(ByteView bytes);

/// Writes x/y/z as float32 followed by whichever attributes the cloud has.
/// Binary output is byte-deterministic.
Bytes write_ply(const PointCloud& cloud, PlyEncoding encoding = PlyEncoding::kBinaryLittleEndian);

// ---------------------------------------------------------------------------
// KITTI-style velodyne scans and label files
// ---------------------------------------------------------------------------

/// Semantic id in the low 16 bits, instance id in the high 16 bits.
struct PackedLabel {
  std::uint32_t raw = 0;

  std::uint32_t semantic() const { return raw & 0xFFFFu; }
  std::uint32_t instance() const { return raw >> 16; }
  static PackedLabel pack(std::uint32_t semantic, std::uint32_t instance);
};

struct KittiLabels {
  std::vector<std::uint32_t> labels;
  std::vector<std::uint32_t> instances;
};

/// Records of four float32 (x, y, z, reflectance); reflectance becomes the
/// feature channel.
PointCloud read_kitti_bin(ByteView bytes);
Bytes write_kitti_bin(const PointCloud& cloud);

KittiLabels read_kitti_labels(ByteView bytes, std::size_t point_count);
Bytes write_kitti_labels(std::span<const std::uint32_t> labels, std::span<const std::uint32_t> instances);

// ---------------------------------------------------------------------------
// Whitespace-separated "x y z r g b" room files
// ---------------------------------------------------------------------------

PointCloud read_xyzrgb_text(std::string_view text);

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteView bytes);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace scenemix::io
