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

#include "dpsample/random.h"

#include "dpsample/errors.h"

namespace dpsample {

std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Mixing the pair first keeps (s, t) and (t, s) apart.
  std::uint64_t x = MixBits(seed) ^ MixBits(stream_id ^ 0x6a09e667f3bcc909ULL);
  for (auto& word : state_) {
    x += 0x9e3779b97f4a7c15ULL;
    word = MixBits(x);
  }
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t RandomStream::NextBelow(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("NextBelow: bound must be positive");
  // Lemire's nearly divisionless rejection.
  unsigned __int128 product =
      static_cast<unsigned __int128>(NextU64()) * bound;
  std::uint64_t low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(NextU64()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

RandomStream RandomStream::Child(std::uint64_t family_key,
                                 std::uint64_t index) const {
  return RandomStream(MixBits(family_key ^ seed_), MixBits(index) ^ stream_id_);
}

}  // namespace dpsample
