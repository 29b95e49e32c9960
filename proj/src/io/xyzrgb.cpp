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

#include <charconv>
#include <string>

#include "scenemix/error.hpp"
#include "scenemix/io.hpp"

namespace scenemix::io {

PointCloud read_xyzrgb_text(std::string_view text) {
  PointCloud cloud;
  auto& colors = cloud.colors.emplace();
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    double v[6];
    int count = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (;;) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == ',')) ++p;
      if (p == end) break;
      if (count == 6) throw LineError(ErrorCode::kParseError, line_no, "more than 6 values");
      const auto res = std::from_chars(p, end, v[count]);
      if (res.ec != std::errc() ||
          (res.ptr != end && *res.ptr != ' ' && *res.ptr != '\t' && *res.ptr != '\r' && *res.ptr != ',')) {
        throw LineError(ErrorCode::kParseError, line_no, "not a number");
      }
      p = res.ptr;
      ++count;
    }
    if (count == 0) continue;
    if (count != 6) throw LineError(ErrorCode::kParseError, line_no, "expected 6 values, got " + std::to_string(count));
    for (int c = 3; c < 6; ++c) {
      if (v[c] < 0.0 || v[c] > 255.0) throw LineError(ErrorCode::kParseError, line_no, "color outside 0..255");
    }
    cloud.positions.emplace_back(v[0], v[1], v[2]);
    colors.emplace_back(v[3] / 255.0, v[4] / 255.0, v[5] / 255.0);
  }
  cloud.reset_loss_mask();
  return cloud;
}

}  // namespace scenemix::io
