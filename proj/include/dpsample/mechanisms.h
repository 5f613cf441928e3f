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

// Noise primitives and the deterministic numeric transforms the samplers are
// built from.
//
// Noise is produced by double-precision transforms of uniform variates. That
// is adequate for evaluation; it is not hardened against floating-point side
// channels.

#ifndef DPSAMPLE_MECHANISMS_H_
#define DPSAMPLE_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpsample/datasets.h"
#include "dpsample/distributions.h"
#include "dpsample/random.h"

namespace dpsample {

// Ceiling on the L2 norm of a binary row in the truncated mean.
class TruncationCeiling {
 public:
  explicit TruncationCeiling(double value);
  double value() const { return value_; }

 private:
  double value_;
};

// Draw from the Laplace density exp(-|x| / scale) / (2 scale).
double LaplaceNoise(double scale, RandomStream& rng);

// Zero-mean normal draw with standard deviation `sigma` (Marsaglia polar).
double GaussianNoise(double sigma, RandomStream& rng);

// Standard Gumbel draw, -ln(-ln U).
double GumbelNoise(RandomStream& rng);

// L1 projection onto the probability simplex: negative entries are clamped
// to zero and the result rescaled to sum to one. An input with no positive
// entry maps to the uniform distribution. Both steps cost exactly the L1
// lower bound, so the result is an L1-nearest simplex point.
KAryDistribution ProjectL1Simplex(std::span<const double> v);

// Mean of the rows of `rows` restricted to `columns` after scaling every
// row whose restricted L2 norm exceeds the ceiling down to norm exactly the
// ceiling. When `flips` is non-empty, column j is read complemented wherever
// flips[j] != 0 (flips is indexed by dataset column). Output entry i belongs
// to columns[i].
std::vector<double> TruncatedMean(const BinaryView& rows,
                                  std::span<const std::size_t> columns,
                                  TruncationCeiling ceiling,
                                  std::span<const std::uint8_t> flips = {});

// Number of rows of `rows` whose restricted L2 norm exceeds the ceiling.
std::size_t CountTruncatedRows(const BinaryView& rows,
                               std::span<const std::size_t> columns,
                               TruncationCeiling ceiling,
                               std::span<const std::uint8_t> flips = {});

// Exponential mechanism over raw occurrence counts: index j is selected
// with probability proportional to exp(epsilon * counts[j] / 2). Implemented
// with the Gumbel-max trick, which is equal in law and never overflows.
std::size_t ExponentialSelect(std::span<const std::uint64_t> counts,
                              double epsilon, RandomStream& rng);

// Exact selection probabilities of ExponentialSelect (softmax, computed
// stably).
std::vector<double> ExponentialSelectProbabilities(
    std::span<const std::uint64_t> counts, double epsilon);

// Nearest point of [lo, hi] to x.
double ClipInterval(double x, double lo, double hi);

}  // namespace dpsample

#endif  // DPSAMPLE_MECHANISMS_H_
