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

// Random variate generation on an explicit RandomStream. Every generator is
// a deterministic function of the stream state, so results reproduce
// exactly for a given (seed, stream_id) on one build.

#ifndef DPSAMPLE_VARIATES_H_
#define DPSAMPLE_VARIATES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpsample/datasets.h"
#include "dpsample/distributions.h"
#include "dpsample/random.h"

namespace dpsample {

// Means below this use sequential-search inversion; at or above it, the
// PTRS transformed-rejection sampler.
inline constexpr double kPoissonInversionCutoff = 30.0;

Element DrawKary(const KAryDistribution& p, RandomStream& rng);

std::vector<std::uint8_t> DrawProduct(const ProductBernoulli& p,
                                      RandomStream& rng);

std::uint64_t DrawPoisson(double lambda, RandomStream& rng);

std::uint64_t DrawBinomial(std::uint64_t trials, double p, RandomStream& rng);

// Counts for each listed cell. `cell_probs` may sum to less than 1; the
// remaining mass belongs to an implicit discard cell whose count is not
// returned. Sequential conditional binomials.
std::vector<std::uint64_t> DrawMultinomial(std::uint64_t trials,
                                           std::span<const double> cell_probs,
                                           RandomStream& rng);

// Multinomial with `cells` cells of equal mass `cell_prob` (cells * cell_prob
// <= 1, remainder discarded), returned sparsely: one cell index per
// non-discarded trial, in draw order. Costs O(trials) regardless of the
// number of cells.
std::vector<std::uint64_t> DrawEqualCellMultinomial(std::uint64_t trials,
                                                    std::uint64_t cells,
                                                    double cell_prob,
                                                    RandomStream& rng);

// Walker/Vose alias table for repeated draws from one k-ary distribution.
class AliasTable {
 public:
  explicit AliasTable(const KAryDistribution& p);

  Element Draw(RandomStream& rng) const;

 private:
  std::vector<double> threshold_;
  std::vector<std::uint32_t> alias_;
};

// `n` i.i.d. records from `p`.
KAryDataset DrawKaryDataset(const KAryDistribution& p, std::size_t n,
                            RandomStream& rng);

// `n` i.i.d. rows from `p`. Each column is generated as a Bin(n, p_j) count
// followed by a uniformly random placement of that many ones, which has the
// same law as n independent Bernoulli draws.
BinaryDataset DrawBinaryDataset(const ProductBernoulli& p, std::size_t n,
                                RandomStream& rng);

// Fills `column` of `out` (rows [begin, begin + count)) with i.i.d. Ber(p).
void FillBernoulliColumn(BinaryDataset& out, std::size_t column,
                         std::size_t begin, std::size_t count, double p,
                         RandomStream& rng);

}  // namespace dpsample

#endif  // DPSAMPLE_VARIATES_H_
