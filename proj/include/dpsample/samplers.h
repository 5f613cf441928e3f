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

// Private single-observation samplers. Each consumes a dataset of i.i.d.
// records and returns one observation whose law is close in total variation
// to the source distribution.

#ifndef DPSAMPLE_SAMPLERS_H_
#define DPSAMPLE_SAMPLERS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpsample/datasets.h"
#include "dpsample/distributions.h"
#include "dpsample/random.h"

namespace dpsample {

// ---------------------------------------------------------------------------
// k-ary Laplace sampler. (epsilon, 0)-DP.

// The distribution the k-ary sampler draws its output from: the empirical
// pmf plus i.i.d. Laplace(2 / (epsilon N)) noise, projected onto the simplex.
KAryDistribution KaryNoisyEstimate(const KAryDataset& x, double epsilon,
                                   RandomStream& rng);

Element KarySample(const KAryDataset& x, double epsilon, RandomStream& rng);

// Smallest N with N >= 2k / (alpha epsilon).
std::size_t KaryRequiredSize(std::size_t k, double alpha, double epsilon);

// ---------------------------------------------------------------------------
// Clipped Bernoulli sampler: output Ber(clip(mean, 1/4, 3/4)). (4/n, 0)-DP
// and accurate on biases in [1/3, 2/3].

double ClipBias(std::span<const std::uint8_t> bits);
double ClipBiasFromCount(std::uint64_t ones, std::uint64_t n);

bool ClipBernoulliSample(std::span<const std::uint8_t> bits, RandomStream& rng);

// max(ceil(72 ln(6/alpha)), ceil(4/epsilon)).
std::size_t ClipBernoulliRequiredSize(double alpha, double epsilon);

// Runs the clipped sampler independently on every column.
// (8d / n^2)-zCDP.
std::vector<std::uint8_t> ClipProductSample(const BinaryDataset& x,
                                            RandomStream& rng);

double ClipProductZcdp(std::size_t d, std::size_t n);

// max(ceil(72 ln(6d/alpha)), ceil(sqrt(8d/rho))).
std::size_t ClipProductRequiredSize(std::size_t d, double alpha, double rho);

// ---------------------------------------------------------------------------
// Recursive-preconditioning product-Bernoulli sampler. rho-zCDP.

struct ProdSamplerConfig {
  double alpha = 0.1;
  double rho = 1.0;
  // Per-event failure mass.
  double beta = 0.1;
  // Multiplier on the per-round record count. 1.0 is the analysed constant;
  // smaller values are for property testing only.
  double constant_scale = 1.0;
  // Below this dimension a single-round sampler is used.
  std::size_t d_min_recursive = 64;

  // Config with beta = alpha / (12 d), the value the accuracy analysis uses.
  static ProdSamplerConfig ForAccuracy(double alpha, double rho, std::size_t d,
                                       double constant_scale = 1.0);

  void Validate() const;
};

// R = max(1, ceil(log2(d / 40))).
std::size_t ProdRounds(std::size_t d);

// constant_scale * 1200 d / (alpha sqrt(2 rho)) * ln^{5/4}(d R / (alpha beta
// sqrt(2 rho))), before rounding.
double ProdRecordsPerRound(std::size_t d, const ProdSamplerConfig& cfg);

// Rows needed by ProdSample: (2R + 2) slices of ceil(ProdRecordsPerRound)
// records, or a single slice when d < d_min_recursive.
std::size_t ProdRequiredRows(std::size_t d, const ProdSamplerConfig& cfg);

bool ProdUsesRecursion(std::size_t d, const ProdSamplerConfig& cfg);

// Result of the bucketing phase. Rounds are numbered as in the algorithm:
// bucketing rounds 1..R, sampling buckets R+1..2R+1. Vectors indexed by
// round have length 2R + 2 with index 0 unused.
struct BucketingState {
  std::size_t rounds = 0;          // R
  std::size_t records_per_round = 0;  // m
  // bucket_of[j] in {R+1, ..., 2R+1}.
  std::vector<std::size_t> bucket_of;
  // buckets[r] lists the coordinates of bucket r (r in R+1..2R+1).
  std::vector<std::vector<std::size_t>> buckets;
  // u[r] = 2^-r for r <= R, u[R+r] = u[r], u[2R+1] = 20/d.
  std::vector<double> u;
  // tau[1] = 3/16, tau[r+1] = tau[r] / 2, for r = 1..R+1.
  std::vector<double> tau;
  // Truncation ceilings T_r; zero for a round that had no coordinates.
  std::vector<double> ceilings;
  // Coordinates read complemented after the orientation round.
  std::vector<std::uint8_t> flips;
};

// Orientation round plus R bucketing rounds on `half`, which is split into
// R + 1 slices of floor(rows / (R + 1)) records. Requires d >=
// d_min_recursive and at least (R + 1) * ceil(ProdRecordsPerRound) rows.
BucketingState ProdBucketingPhase(const BinaryView& half,
                                  const ProdSamplerConfig& cfg,
                                  RandomStream& rng);

struct ProdSampleTrace {
  std::vector<std::uint8_t> output;
  // Noisy, unclipped bias estimate per coordinate in the oriented frame.
  std::vector<double> estimates;
  // Present only on the recursive path.
  BucketingState state;
  bool recursive = false;
};

ProdSampleTrace ProdSampleTraced(const BinaryDataset& x,
                                 const ProdSamplerConfig& cfg,
                                 RandomStream& rng);

std::vector<std::uint8_t> ProdSample(const BinaryDataset& x,
                                     const ProdSamplerConfig& cfg,
                                     RandomStream& rng);

}  // namespace dpsample

#endif  // DPSAMPLE_SAMPLERS_H_
