// Copyright 2026 The dpsample Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPSAMPLE_RANDOM_H_
#define DPSAMPLE_RANDOM_H_

#include <array>
#include <cstdint>
#include <limits>

namespace dpsample {

// A seeded, reproducible source of random bits identified by (seed,
// stream_id). Distinct identifiers give independent sequences; identical
// identifiers reproduce the same sequence bit for bit.
//
// The generator is xoshiro256** with its 256-bit state expanded from the
// identifier pair by splitmix64. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return NextU64(); }

  std::uint64_t NextU64() {
    const std::uint64_t result = Rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = Rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double NextUniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); safe to pass to log().
  double NextOpenUniform() {
    return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t NextBelow(std::uint64_t bound);

  bool NextBernoulli(double p) { return NextUniform() < p; }

  // A child stream keyed by `family_key` (normally a fresh NextU64() from
  // this stream) and `index`. Children of one family with distinct indices
  // are independent of each other and of the parent.
  RandomStream Child(std::uint64_t family_key, std::uint64_t index) const;

 private:
  static std::uint64_t Rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_;
};

// splitmix64 finalizer; exposed for deriving keys.
std::uint64_t MixBits(std::uint64_t x);

}  // namespace dpsample

#endif  // DPSAMPLE_RANDOM_H_
