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

#include <bit>
#include <cstdint>
#include <cstring>
#include <vector>

namespace scenemix::io::detail {

template <typename U>
U load_le(const std::uint8_t* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(p[i]) << (8 * i));
  return v;
}

template <typename U>
void store_le(std::vector<std::uint8_t>& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline float load_f32(const std::uint8_t* p) { return std::bit_cast<float>(load_le<std::uint32_t>(p)); }
inline double load_f64(const std::uint8_t* p) { return std::bit_cast<double>(load_le<std::uint64_t>(p)); }

inline void store_f32(std::vector<std::uint8_t>& out, float v) { store_le(out, std::bit_cast<std::uint32_t>(v)); }

}  // namespace scenemix::io::detail
