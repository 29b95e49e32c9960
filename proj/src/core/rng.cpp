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

#include "scenemix/rng.hpp"

#include <cmath>
#include <numbers>

#include "scenemix/error.hpp"

namespace scenemix {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

RngStream::RngStream(SeedPath path) : path_(std::move(path)) {
  std::uint64_t k = mix64(path_.master_seed ^ 0x5CE4E5B9D1CE4E5BULL);
  k = mix64(k ^ (path_.scene + kGolden));
  k = mix64(k ^ (path_.epoch + 2 * kGolden));
  k = mix64(k ^ fnv1a64(path_.tag));
  key0_ = k;
  key1_ = mix64(k + kGolden);
}

RngStream RngStream::child(std::string_view name) const {
  SeedPath p = path_;
  p.tag += '/';
  p.tag += name;
  return RngStream(std::move(p));
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t c = counter_++;
  return mix64(mix64(key0_ ^ (c * kGolden)) + key1_);
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  if (lo == hi) {
    next_u64();
    return lo;
  }
  const double v = lo + (hi - lo) * uniform01();
  // Rounding in lo + (hi - lo) * u can land exactly on hi.
  return v < hi ? v : std::nextafter(hi, lo);
}

double RngStream::normal() {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool RngStream::bernoulli(double p) { return uniform01() < p; }

std::uint64_t RngStream::index(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "index() over an empty range");
  // Lemire's multiply-shift with rejection.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t scene, std::uint64_t epoch,
                        std::string_view op_tag) {
  return RngStream(SeedPath{master_seed, scene, epoch, std::string(op_tag)});
}

}  // namespace scenemix
