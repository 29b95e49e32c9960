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
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>

#include "byte_order.hpp"
#include "scenemix/error.hpp"
#include "scenemix/io.hpp"

namespace scenemix::io {

namespace {

using detail::load_f32;
using detail::load_f64;
using detail::load_le;

std::optional<PlyScalar> scalar_from_name(std::string_view name) {
  if (name == "char" || name == "int8") return PlyScalar::kInt8;
  if (name == "uchar" || name == "uint8") return PlyScalar::kUInt8;
  if (name == "short" || name == "int16") return PlyScalar::kInt16;
  if (name == "ushort" || name == "uint16") return PlyScalar::kUInt16;
  if (name == "int" || name == "int32") return PlyScalar::kInt32;
  if (name == "uint" || name == "uint32") return PlyScalar::kUInt32;
  if (name == "float" || name == "float32") return PlyScalar::kFloat32;
  if (name == "double" || name == "float64") return PlyScalar::kFloat64;
  return std::nullopt;
}

const char* scalar_name(PlyScalar kind) {
  switch (kind) {
    case PlyScalar::kInt8: return "char";
    case PlyScalar::kUInt8: return "uchar";
    case PlyScalar::kInt16: return "short";
    case PlyScalar::kUInt16: return "ushort";
    case PlyScalar::kInt32: return "int";
    case PlyScalar::kUInt32: return "uint";
    case PlyScalar::kFloat32: return "float";
    case PlyScalar::kFloat64: return "double";
  }
  return "float";
}

bool is_integer(PlyScalar kind) { return kind != PlyScalar::kFloat32 && kind != PlyScalar::kFloat64; }

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double read_binary_scalar(PlyScalar kind, const std::uint8_t* p) {
  switch (kind) {
    case PlyScalar::kInt8: return static_cast<std::int8_t>(p[0]);
    case PlyScalar::kUInt8: return p[0];
    case PlyScalar::kInt16: return static_cast<std::int16_t>(load_le<std::uint16_t>(p));
    case PlyScalar::kUInt16: return load_le<std::uint16_t>(p);
    case PlyScalar::kInt32: return static_cast<std::int32_t>(load_le<std::uint32_t>(p));
    case PlyScalar::kUInt32: return load_le<std::uint32_t>(p);
    case PlyScalar::kFloat32: return load_f32(p);
    case PlyScalar::kFloat64: return load_f64(p);
  }
  return 0.0;
}

// Cursor over the payload that yields one scalar at a time in either encoding.
class PayloadReader {
 public:
  PayloadReader(ByteView bytes, std::size_t offset, PlyEncoding encoding)
      : bytes_(bytes), pos_(offset), encoding_(encoding) {}

  double next(PlyScalar kind) {
    return encoding_ == PlyEncoding::kAscii ? next_ascii(kind) : next_binary(kind);
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  double next_binary(PlyScalar kind) {
    const std::size_t n = scalar_size(kind);
    if (remaining() < n) throw Error(ErrorCode::kTruncated, "binary payload ends mid-record");
    const double v = read_binary_scalar(kind, bytes_.data() + pos_);
    pos_ += n;
    return v;
  }

  double next_ascii(PlyScalar kind) {
    const auto* data = reinterpret_cast<const char*>(bytes_.data());
    while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(data[pos_]))) ++pos_;
    if (pos_ >= bytes_.size()) throw Error(ErrorCode::kTruncated, "ascii payload ends mid-record");
    std::size_t end = pos_;
    while (end < bytes_.size() && !std::isspace(static_cast<unsigned char>(data[end]))) ++end;
    const std::string_view token(data + pos_, end - pos_);
    pos_ = end;

    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw Error(ErrorCode::kParseError, "bad ascii value '" + std::string(token) + "'");
    }
    if (is_integer(kind) && v != std::floor(v)) {
      throw Error(ErrorCode::kParseError, "non-integer value '" + std::string(token) + "'");
    }
    // Values are stored at the declared precision.
    if (kind == PlyScalar::kFloat32) v = static_cast<float>(v);
    return v;
  }

  ByteView bytes_;
  std::size_t pos_;
  PlyEncoding encoding_;
};

void skip_record(PayloadReader& reader, const PlyElement& element) {
  for (const PlyProperty& prop : element.properties) {
    if (prop.is_list) {
      const auto n = static_cast<std::size_t>(reader.next(prop.count_kind));
      for (std::size_t i = 0; i < n; ++i) reader.next(prop.kind);
    } else {
      reader.next(prop.kind);
    }
  }
}

}  // namespace

std::size_t scalar_size(PlyScalar kind) {
  switch (kind) {
    case PlyScalar::kInt8:
    case PlyScalar::kUInt8: return 1;
    case PlyScalar::kInt16:
    case PlyScalar::kUInt16: return 2;
    case PlyScalar::kInt32:
    case PlyScalar::kUInt32:
    case PlyScalar::kFloat32: return 4;
    case PlyScalar::kFloat64: return 8;
  }
  return 0;
}

std::size_t PlyElement::record_size() const {
  std::size_t size = 0;
  for (const PlyProperty& p : properties) {
    if (p.is_list) return 0;
    size += scalar_size(p.kind);
  }
  return size;
}

const PlyElement* PlyHeader::vertex() const {
  const auto it = std::find_if(elements.begin(), elements.end(),
                               [](const PlyElement& e) { return e.name == "vertex"; });
  return it == elements.end() ? nullptr : &*it;
}

std::size_t PlyHeader::point_count() const {
  const PlyElement* v = vertex();
  return v ? v->count : 0;
}

PlyHeader parse_ply_header(ByteView bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  PlyHeader header;
  bool saw_format = false;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  for (;;) {
    const std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) throw Error(ErrorCode::kTruncated, "PLY header has no end_header");
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto tokens = split_ws(line);

    if (line_no == 1) {
      if (tokens.size() != 1 || tokens[0] != "ply") throw Error(ErrorCode::kParseError, "missing 'ply' magic");
      continue;
    }
    if (tokens.empty() || tokens[0] == "comment" || tokens[0] == "obj_info") continue;
    if (tokens[0] == "end_header") break;

    if (tokens[0] == "format") {
      if (tokens.size() < 2) throw LineError(ErrorCode::kParseError, line_no, "malformed format line");
      if (tokens[1] == "ascii") {
        header.encoding = PlyEncoding::kAscii;
      } else if (tokens[1] == "binary_little_endian") {
        header.encoding = PlyEncoding::kBinaryLittleEndian;
      } else {
        throw Error(ErrorCode::kUnsupportedEncoding, std::string(tokens[1]));
      }
      saw_format = true;
    } else if (tokens[0] == "element") {
      if (tokens.size() != 3) throw LineError(ErrorCode::kParseError, line_no, "malformed element line");
      PlyElement element;
      element.name = std::string(tokens[1]);
      const auto [ptr, ec] = std::from_chars(tokens[2].data(), tokens[2].data() + tokens[2].size(), element.count);
      if (ec != std::errc() || ptr != tokens[2].data() + tokens[2].size()) {
        throw LineError(ErrorCode::kParseError, line_no, "bad element count");
      }
      header.elements.push_back(std::move(element));
    } else if (tokens[0] == "property") {
      if (header.elements.empty()) throw LineError(ErrorCode::kParseError, line_no, "property before element");
      PlyProperty prop;
      if (tokens.size() == 5 && tokens[1] == "list") {
        const auto count_kind = scalar_from_name(tokens[2]);
        const auto kind = scalar_from_name(tokens[3]);
        if (!count_kind || !kind || !is_integer(*count_kind)) {
          throw LineError(ErrorCode::kParseError, line_no, "bad list property types");
        }
        prop = {std::string(tokens[4]), *kind, true, *count_kind};
      } else if (tokens.size() == 3) {
        const auto kind = scalar_from_name(tokens[1]);
        if (!kind) throw LineError(ErrorCode::kParseError, line_no, "unknown property type");
        prop = {std::string(tokens[2]), *kind, false, PlyScalar::kUInt8};
      } else {
        throw LineError(ErrorCode::kParseError, line_no, "malformed property line");
      }
      header.elements.back().properties.push_back(std::move(prop));
    } else {
      throw LineError(ErrorCode::kParseError, line_no, "unknown header keyword '" + std::string(tokens[0]) + "'");
    }
  }

  if (!saw_format) throw Error(ErrorCode::kParseError, "PLY header has no format line");
  const PlyElement* vertex = header.vertex();
  if (!vertex) throw Error(ErrorCode::kMissingProperty, "no vertex element");
  for (const char* axis : {"x", "y", "z"}) {
    const bool found = std::any_of(vertex->properties.begin(), vertex->properties.end(),
                                   [&](const PlyProperty& p) { return p.name == axis && !p.is_list; });
    if (!found) throw Error(ErrorCode::kMissingProperty, std::string("vertex lacks '") + axis + "'");
  }
  header.header_bytes = pos;
  return header;
}

PointCloud read_ply(ByteView bytes) {
  const PlyHeader header = parse_ply_header(bytes);
  PayloadReader reader(bytes, header.header_bytes, header.encoding);

  for (const PlyElement& element : header.elements) {
    if (element.name != "vertex") {
      for (std::size_t i = 0; i < element.count; ++i) skip_record(reader, element);
      continue;
    }

    const std::size_t stride = element.record_size();
    if (header.encoding == PlyEncoding::kBinaryLittleEndian && stride > 0 &&
        reader.remaining() / stride < element.count) {
      throw Error(ErrorCode::kTruncated, "payload shorter than " + std::to_string(element.count) + " x " +
                                             std::to_string(stride) + " bytes");
    }

    enum Slot { kX, kY, kZ, kRed, kGreen, kBlue, kLabel, kInstance, kReflectance, kLossMask, kOther };
    std::vector<Slot> slots;
    bool has_color[3] = {false, false, false};
    bool has_label = false, has_instance = false, has_reflectance = false, has_mask = false;
    for (const PlyProperty& p : element.properties) {
      Slot s = kOther;
      if (!p.is_list) {
        if (p.name == "x") s = kX;
        else if (p.name == "y") s = kY;
        else if (p.name == "z") s = kZ;
        else if (p.name == "red") s = kRed, has_color[0] = true;
        else if (p.name == "green") s = kGreen, has_color[1] = true;
        else if (p.name == "blue") s = kBlue, has_color[2] = true;
        else if (p.name == "label") s = kLabel, has_label = true;
        else if (p.name == "instance") s = kInstance, has_instance = true;
        else if (p.name == "reflectance") s = kReflectance, has_reflectance = true;
        else if (p.name == "loss_mask") s = kLossMask, has_mask = true;
      }
      slots.push_back(s);
    }
    const bool colors = has_color[0] && has_color[1] && has_color[2];

    PointCloud cloud;
    const std::size_t n = element.count;
    cloud.positions.resize(n);
    if (colors) cloud.colors.emplace(n);
    if (has_label) cloud.labels.emplace(n);
    if (has_instance) cloud.instances.emplace(n);
    if (has_reflectance) cloud.features.emplace(n);
    std::vector<bool> mask(n, false);

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < element.properties.size(); ++j) {
        const PlyProperty& p = element.properties[j];
        if (p.is_list) {
          const auto len = static_cast<std::size_t>(reader.next(p.count_kind));
          for (std::size_t k = 0; k < len; ++k) reader.next(p.kind);
          continue;
        }
        const double v = reader.next(p.kind);
        switch (slots[j]) {
          case kX: cloud.positions[i].x() = v; break;
          case kY: cloud.positions[i].y() = v; break;
          case kZ: cloud.positions[i].z() = v; break;
          case kRed:
          case kGreen:
          case kBlue:
            if (colors) (*cloud.colors)[i][slots[j] - kRed] = is_integer(p.kind) ? v / 255.0 : v;
            break;
          case kLabel: (*cloud.labels)[i] = static_cast<std::uint32_t>(v); break;
          case kInstance: (*cloud.instances)[i] = static_cast<std::uint32_t>(v); break;
          case kReflectance: (*cloud.features)[i] = v; break;
          case kLossMask: mask[i] = v != 0.0; break;
          case kOther: break;
        }
      }
    }
    if (has_mask) {
      cloud.loss_mask = std::move(mask);
    } else {
      cloud.reset_loss_mask();
    }
    return cloud;
  }
  throw Error(ErrorCode::kMissingProperty, "no vertex element");
}

namespace {

std::uint8_t quantize_color(double c) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
}

void append_text(Bytes& out, std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }

void append_float_text(Bytes& out, float v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.insert(out.end(), buf, res.ptr);
}

template <typename T>
void append_int_text(Bytes& out, T v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.insert(out.end(), buf, res.ptr);
}

}  // namespace

Bytes write_ply(const PointCloud& cloud, PlyEncoding encoding) {
  if (cloud.empty()) throw Error(ErrorCode::kEmptyCloud, "refusing to write an empty PLY");
  cloud.check();

  PointCloud defaults = cloud;
  defaults.reset_loss_mask();
  const bool write_mask = defaults.loss_mask != cloud.loss_mask;

  std::vector<std::pair<const char*, PlyScalar>> props = {
      {"x", PlyScalar::kFloat32}, {"y", PlyScalar::kFloat32}, {"z", PlyScalar::kFloat32}};
  if (cloud.colors) {
    props.insert(props.end(), {{"red", PlyScalar::kUInt8}, {"green", PlyScalar::kUInt8}, {"blue", PlyScalar::kUInt8}});
  }
  if (cloud.features) props.emplace_back("reflectance", PlyScalar::kFloat32);
  if (cloud.labels) props.emplace_back("label", PlyScalar::kUInt32);
  if (cloud.instances) props.emplace_back("instance", PlyScalar::kUInt32);
  if (write_mask) props.emplace_back("loss_mask", PlyScalar::kUInt8);

  std::string head = "ply\nformat ";
  head += encoding == PlyEncoding::kAscii ? "ascii" : "binary_little_endian";
  head += " 1.0\nelement vertex " + std::to_string(cloud.size()) + "\n";
  for (const auto& [name, kind] : props) {
    head += std::string("property ") + scalar_name(kind) + " " + name + "\n";
  }
  head += "end_header\n";

  Bytes out;
  std::size_t stride = 0;
  for (const auto& prop : props) stride += scalar_size(prop.second);
  out.reserve(head.size() + cloud.size() * (encoding == PlyEncoding::kAscii ? 4 * stride : stride));
  append_text(out, head);

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    if (encoding == PlyEncoding::kBinaryLittleEndian) {
      for (int a = 0; a < 3; ++a) detail::store_f32(out, static_cast<float>(p[a]));
      if (cloud.colors) {
        for (int a = 0; a < 3; ++a) out.push_back(quantize_color((*cloud.colors)[i][a]));
      }
      if (cloud.features) detail::store_f32(out, static_cast<float>((*cloud.features)[i]));
      if (cloud.labels) detail::store_le<std::uint32_t>(out, (*cloud.labels)[i]);
      if (cloud.instances) detail::store_le<std::uint32_t>(out, (*cloud.instances)[i]);
      if (write_mask) out.push_back(cloud.loss_mask[i] ? 1 : 0);
    } else {
      for (int a = 0; a < 3; ++a) {
        if (a) out.push_back(' ');
        append_float_text(out, static_cast<float>(p[a]));
      }
      if (cloud.colors) {
        for (int a = 0; a < 3; ++a) {
          out.push_back(' ');
          append_int_text(out, static_cast<unsigned>(quantize_color((*cloud.colors)[i][a])));
        }
      }
      if (cloud.features) {
        out.push_back(' ');
        append_float_text(out, static_cast<float>((*cloud.features)[i]));
      }
      if (cloud.labels) {
        out.push_back(' ');
        append_int_text(out, (*cloud.labels)[i]);
      }
      if (cloud.instances) {
        out.push_back(' ');
        append_int_text(out, (*cloud.instances)[i]);
      }
      if (write_mask) append_text(out, cloud.loss_mask[i] ? " 1" : " 0");
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace scenemix::io
