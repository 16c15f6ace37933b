/*
 * Copyright (C) 2026 The lowsync-bgs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>

namespace bgs {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream.
///
/// Draw number i (0-based) of stream `stream` under `seed` is
///
///   key  = mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15))
///   x_i  = mix64(key + (i + 1) * 0x9e3779b97f4a7c15)
///
/// which is the plain SplitMix64 sequence started at `key`.  Any draw can be
/// computed directly from (seed, stream, i), so other implementations can
/// reproduce the generated test matrices exactly.
///
/// Uniform variates on (0, 1) use the top 53 bits: u = ((x >> 11) + 0.5) 2^-53.
/// Standard normal variates are the inverse normal CDF of one uniform,
/// -sqrt(2) erfc^{-1}(2u).
class CounterRng {
public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(seed ^ mix64(stream + kGamma))) {}

  std::uint64_t at(std::uint64_t counter) const { return mix64(key_ + (counter + 1) * kGamma); }
  std::uint64_t next_u64() { return at(counter_++); }

  /// Open interval (0, 1).
  double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();

  std::uint64_t position() const { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

} // namespace bgs
