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
// Forward algorithms from the lower-bound reduction: star distributions,
// the special-element picker, the Poisson-coupling dataset transform, the
// universe transform, the composite reduced sampler, and the two
// marginal-estimation reductions.

#ifndef DPSAMPLE_REDUCTIONS_H_
#define DPSAMPLE_REDUCTIONS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dpsample/datasets.h"
#include "dpsample/distributions.h"
#include "dpsample/random.h"
#include "dpsample/transforms.h"

namespace dpsample {

// A distribution on {1..2k+1} with mass 1 - alpha_star on `special` and
// alpha_star / k on each of the k `support` elements.
class StarDistribution {
 public:
  StarDistribution(std::size_t k, Element special, std::vector<Element> support,
                   double alpha_star);

  // special = 2k + 1, support = {1..k}.
  static StarDistribution Canonical(std::size_t k, double alpha_star);

  std::size_t k() const { return k_; }
  std::size_t universe() const { return 2 * k_ + 1; }
  Element special() const { return special_; }
  std::span<const Element> support() const { return support_; }
  double alpha_star() const { return alpha_star_; }

  KAryDistribution ToKary() const;

 private:
  std::size_t k_;
  Element special_;
  std::vector<Element> support_;
  double alpha_star_;
};

// 0-based coordinate of element e != s once s is skipped.
std::size_t SkipCoordinate(Element e, Element s);

// The product distribution on {0,1}^{2k} whose coordinate for element e is
// P(e), with the special element skipped.
ProductBernoulli StarToProduct(const StarDistribution& p);

// Exponential mechanism over occurrence counts at `epsilon`. (eps, 0)-DP.
Element PickSpecialElement(const KAryDataset& x, double epsilon,
                           RandomStream& rng);

// 1 - p / (1 - e^{-2p}), the probability a thresholded cell is zeroed.
double ZeroingProbability(double p);

// floor(n/2) x 2k dataset from the histogram of `x` (universe 2k+1). For
// each element i != s, h[i] balls go into floor(n/2) cells of mass 2/n
// each (the rest is discarded), cells are capped at 1, then each one is
// zeroed with ZeroingProbability(alpha_star / k). On Po(n) star data the
// rows are i.i.d. from StarToProduct.
BinaryDataset DatasetTransform(const KAryDataset& x, std::size_t k,
                               std::size_t n, double alpha_star, Element s,
                               RandomStream& rng);

// All-zero b maps to s; otherwise a uniform element among the set bits,
// shifted past s.
Element UniverseTransform(std::span<const std::uint8_t> b, Element s,
                          RandomStream& rng);

struct ReducedSamplerParams {
  double epsilon = 1.0;
  double delta = 0.0;
  std::size_t k = 2;
  // Mean of the Poisson input size.
  double n = 0.0;
  double alpha = 0.01;
  double c = 10.0;
};

// Expected size of the split used by the special-element picker,
// 2 C ln k / (alpha eps).
double ReducedPickerMean(const ReducedSamplerParams& params);

// Records (in expectation) left for the dataset transform.
std::size_t ReducedTransformSize(const ReducedSamplerParams& params);

// The composite sampler over {1..2k+1}. The inner handle must be a product
// sampler on 2k coordinates; it should be (eps/4, delta/2)-DP and
// alpha/25-accurate for the end-to-end guarantees to apply.
Element ReducedKarySample(const KAryDataset& x,
                          const ReducedSamplerParams& params,
                          const ProductSamplerHandle& inner, RandomStream& rng);

// ceil(ln(2 / (beta0 gamma0)) / (2 alpha^2)).
std::size_t MarginalSampleCount(double alpha, double beta0, double gamma0);

// Splits x into c parts of floor(rows / c) rows, runs the sampler on each
// and averages the outputs coordinate-wise.
std::vector<double> MarginalEstimateViaSampler(
    const BinaryDataset& x, std::size_t c, const ProductSamplerHandle& sampler,
    RandomStream& rng);

using MarginalEstimatorFn = std::function<std::vector<double>(
    const BinaryDataset&, RandomStream&)>;

// Flips every bit independently with probability 1/3.
BinaryDataset BinarySymmetricChannel(const BinaryDataset& x,
                                     RandomStream& rng);

// Channel bias p / 3 + 1/3 and its inverse 3q - 1 (unclipped).
double ChannelBias(double p);
double RescaleChannelEstimate(double q);

// Channel, then a bounded-bias estimator, then the inverse bias map.
std::vector<double> MarginalEstimateGeneral(const BinaryDataset& x,
                                            const MarginalEstimatorFn& estimator,
                                            RandomStream& rng);

}  // namespace dpsample

#endif  // DPSAMPLE_REDUCTIONS_H_
