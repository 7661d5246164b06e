// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//
// Deterministic pseudorandom streams.
//
// Every stochastic component of the library draws from SplitMix64 streams
// derived from an explicit (seed, key...) tuple, so results are reproducible
// bit-for-bit across platforms and thread counts. There is no wall-clock
// seeding anywhere.
//

#pragma once

#include <cstdint>
#include <initializer_list>

namespace cascade {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  constexpr std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53 random mantissa bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [a, b).
  double next_in(double a, double b) { return a + next_double() * (b - a); }

  // Uniform in [0, n), unbiased via rejection. Requires n >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t reject_below = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= reject_below) return x % n;
    }
  }

 private:
  std::uint64_t state_;
};

// Substream derivation: s = mix64(seed + kGolden), then each key folds in as
// s = mix64(s + kGolden + key). Distinct key tuples give independent streams;
// the derivation is part of the output contract and must not change.
constexpr std::uint64_t derive_stream_state(
    std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t s = mix64(seed + kGolden);
  for (std::uint64_t k : keys) s = mix64(s + kGolden + k);
  return s;
}

inline SplitMix64 substream(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> keys) {
  return SplitMix64(derive_stream_state(seed, keys));
}

}  // namespace cascade
