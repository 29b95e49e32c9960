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

#include <string>

#include "byte_order.hpp"
#include "scenemix/error.hpp"
#include "scenemix/io.hpp"

namespace scenemix::io {

namespace {

constexpr std::size_t kRecordBytes = 16;

}  // namespace

PackedLabel PackedLabel::pack(std::uint32_t semantic, std::uint32_t instance) {
  if (semantic > 0xFFFFu || instance > 0xFFFFu) {
    throw Error(ErrorCode::kInvalidArgument, "semantic and instance ids must fit in 16 bits");
  }
  return PackedLabel{semantic | (instance << 16)};
}

PointCloud read_kitti_bin(ByteView bytes) {
  if (bytes.size() % kRecordBytes != 0) {
    throw Error(ErrorCode::kTruncated, "scan length " + std::to_string(bytes.size()) + " is not a multiple of 16");
  }
  const std::size_t n = bytes.size() / kRecordBytes;
  PointCloud cloud;
  cloud.positions.reserve(n);
  auto& features = cloud.features.emplace();
  features.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* rec = bytes.data() + i * kRecordBytes;
    cloud.positions.emplace_back(detail::load_f32(rec), detail::load_f32(rec + 4), detail::load_f32(rec + 8));
    features.push_back(detail::load_f32(rec + 12));
  }
  cloud.reset_loss_mask();
  return cloud;
}

Bytes write_kitti_bin(const PointCloud& cloud) {
  cloud.check();
  Bytes out;
  out.reserve(cloud.size() * kRecordBytes);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    detail::store_f32(out, static_cast<float>(p.x()));
    detail::store_f32(out, static_cast<float>(p.y()));
    detail::store_f32(out, static_cast<float>(p.z()));
    detail::store_f32(out, cloud.features ? static_cast<float>((*cloud.features)[i]) : 0.0f);
  }
  return out;
}

KittiLabels read_kitti_labels(ByteView bytes, std::size_t point_count) {
  if (bytes.size() != 4 * point_count) {
    throw Error(ErrorCode::kCountMismatch, "label file has " + std::to_string(bytes.size()) + " bytes for " +
                                               std::to_string(point_count) + " points");
  }
  KittiLabels out;
  out.labels.reserve(point_count);
  out.instances.reserve(point_count);
  for (std::size_t i = 0; i < point_count; ++i) {
    const PackedLabel packed{detail::load_le<std::uint32_t>(bytes.data() + 4 * i)};
    out.labels.push_back(packed.semantic());
    out.instances.push_back(packed.instance());
  }
  return out;
}

Bytes write_kitti_labels(std::span<const std::uint32_t> labels, std::span<const std::uint32_t> instances) {
  if (!instances.empty() && instances.size() != labels.size()) {
    throw Error(ErrorCode::kCountMismatch, "labels and instances differ in length");
  }
  Bytes out;
  out.reserve(4 * labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint32_t instance = instances.empty() ? 0 : instances[i];
    detail::store_le<std::uint32_t>(out, PackedLabel::pack(labels[i], instance).raw);
  }
  return out;
}

}  // namespace scenemix::io
