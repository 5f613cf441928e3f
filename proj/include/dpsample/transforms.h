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
// Sampler-to-sampler wrappers: Poissonization, amplification by
// subsampling, and relabeling symmetrization. All wrappers consume and
// produce SamplerHandle, so they compose in any order.

#ifndef DPSAMPLE_TRANSFORMS_H_
#define DPSAMPLE_TRANSFORMS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dpsample/datasets.h"
#include "dpsample/distributions.h"
#include "dpsample/privacy.h"
#include "dpsample/random.h"

namespace dpsample {

using KarySamplerFn =
    std::function<Element(const KAryDataset&, RandomStream&)>;

// A k-ary sampler plus descriptive metadata. The metadata is not enforced;
// wrappers recompute it from the inner handle's values.
struct SamplerHandle {
  KarySamplerFn run;
  std::size_t k = 0;
  // Dataset size the accuracy claim refers to (a mean for Poisson inputs).
  double expected_size = 0.0;
  std::optional<PrivacyBudget> budget;
  double alpha = 0.0;

  Element operator()(const KAryDataset& x, RandomStream& rng) const {
    return run(x, rng);
  }
};

using ProductSamplerFn = std::function<std::vector<std::uint8_t>(
    const BinaryDataset&, RandomStream&)>;

struct ProductSamplerHandle {
  ProductSamplerFn run;
  std::size_t d = 0;
  double expected_size = 0.0;
  std::optional<PrivacyBudget> budget;
  double alpha = 0.0;

  std::vector<std::uint8_t> operator()(const BinaryDataset& x,
                                       RandomStream& rng) const {
    return run(x, rng);
  }
};

// The k-ary Laplace sampler at `epsilon`, sized for accuracy `alpha`.
SamplerHandle KarySamplerHandle(std::size_t k, double epsilon, double alpha);

// Ignores its input and returns a fresh draw from `p`. Not private; the
// reference point for accuracy tests.
SamplerHandle PerfectSamplerHandle(const KAryDistribution& p);
ProductSamplerHandle PerfectProductSamplerHandle(const ProductBernoulli& p);

// e^{-n/6}: accuracy lost by the Poisson wrapper at threshold n.
double PoissonizationSlack(std::size_t n);

// Returns `fallback` on inputs with fewer than n records and delegates
// otherwise. Meant for inputs of Po(2n) size.
SamplerHandle Poissonized(SamplerHandle inner, std::size_t n,
                          Element fallback);

// Keeps each record independently with probability `rate`, then delegates.
// rate == 1 delegates the input unchanged. An (eps, delta) budget on the
// inner handle becomes the amplified one; a zCDP budget is dropped, since
// no amplification statement is made for it.
SamplerHandle SubsampleAmplified(SamplerHandle inner, double rate);

// Relabels the universe by a fresh uniform permutation pi, runs the inner
// sampler on pi(x) and returns pi^{-1} of its output. The result depends
// on x only through its frequency counts.
SamplerHandle PermutationSymmetrized(SamplerHandle inner);

// Bernoulli(rate) thinning of the records of `x`, order preserved.
KAryDataset Subsample(const KAryDataset& x, double rate, RandomStream& rng);

// A uniform permutation of {1..k}: perm[j - 1] is the image of j.
std::vector<Element> RandomPermutation(std::size_t k, RandomStream& rng);

}  // namespace dpsample

#endif  // DPSAMPLE_TRANSFORMS_H_
