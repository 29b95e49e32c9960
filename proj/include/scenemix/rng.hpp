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
#include <limits>
#include <string>
#include <string_view>

namespace scenemix {

/// Inputs that fully determine a stream.
struct SeedPath {
  std::uint64_t master_seed = 0;
  std::uint64_t scene = 0;
  std::uint64_t epoch = 0;
  std::string tag;

  bool operator==(const SeedPath&) const = default;
};

/**
 * Counter-based random stream keyed by (master seed, scene, epoch, op tag).
 *
 * The i-th output is a pure function of the key and i, so two streams with the
 * same path produce the same sequence no matter which thread runs them or how
 * calls on other streams interleave. Distributions are implemented here rather
 * than taken from <random>, whose algorithms vary between standard libraries.
 */
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(SeedPath path);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  const SeedPath& path() const noexcept { return path_; }

  /// Stream at path tag + "/" + name. Independent of how far this stream has
  /// advanced.
  RngStream child(std::string_view name) const;

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi);
  /// Standard normal (Box-Muller, two raw draws per call).
  double normal();
  bool bernoulli(double p);
  /// Unbiased integer on [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n);

  /// Raw 64-bit values consumed so far.
  std::uint64_t draws() const noexcept { return counter_; }

 private:
  SeedPath path_;
  std::uint64_t key0_;
  std::uint64_t key1_;
  std::uint64_t counter_ = 0;
};

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t scene, std::uint64_t epoch,
                        std::string_view op_tag);

/// 64-bit FNV-1a; used to fold op tags into stream keys.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace scenemix
