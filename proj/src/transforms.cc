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

#include "dpsample/transforms.h"

#include <cmath>
#include <utility>

#include "dpsample/errors.h"
#include "dpsample/samplers.h"
#include "dpsample/variates.h"

namespace dpsample {

SamplerHandle KarySamplerHandle(std::size_t k, double epsilon, double alpha) {
  SamplerHandle handle;
  handle.run = [epsilon](const KAryDataset& x, RandomStream& rng) {
    return KarySample(x, epsilon, rng);
  };
  handle.k = k;
  handle.expected_size =
      static_cast<double>(KaryRequiredSize(k, alpha, epsilon));
  handle.budget = PrivacyBudget::Approx(epsilon);
  handle.alpha = alpha;
  return handle;
}

SamplerHandle PerfectSamplerHandle(const KAryDistribution& p) {
  SamplerHandle handle;
  handle.run = [table = AliasTable(p)](const KAryDataset&, RandomStream& rng) {
    return table.Draw(rng);
  };
  handle.k = p.k();
  return handle;
}

ProductSamplerHandle PerfectProductSamplerHandle(const ProductBernoulli& p) {
  ProductSamplerHandle handle;
  handle.run = [p](const BinaryDataset&, RandomStream& rng) {
    return DrawProduct(p, rng);
  };
  handle.d = p.d();
  return handle;
}

double PoissonizationSlack(std::size_t n) {
  return std::exp(-static_cast<double>(n) / 6.0);
}

SamplerHandle Poissonized(SamplerHandle inner, std::size_t n,
                          Element fallback) {
  if (n == 0) throw ParameterError("Poissonized: n must be positive");
  if (fallback < 1 || fallback > inner.k) {
    throw ParameterError("Poissonized: fallback outside the universe");
  }
  SamplerHandle handle = inner;
  handle.run = [run = std::move(inner.run), n, fallback](
                   const KAryDataset& x, RandomStream& rng) {
    return x.size() < n ? fallback : run(x, rng);
  };
  handle.expected_size = 2.0 * static_cast<double>(n);
  handle.alpha = inner.alpha + PoissonizationSlack(n);
  return handle;
}

KAryDataset Subsample(const KAryDataset& x, double rate, RandomStream& rng) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw ParameterError("subsampling rate must lie in (0, 1]");
  }
  std::vector<Element> kept;
  kept.reserve(static_cast<std::size_t>(rate * static_cast<double>(x.size())));
  for (Element e : x.records()) {
    if (rng.NextBernoulli(rate)) kept.push_back(e);
  }
  return KAryDataset(std::move(kept), x.k());
}

SamplerHandle SubsampleAmplified(SamplerHandle inner, double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw ParameterError("subsampling rate must lie in (0, 1]");
  }
  SamplerHandle handle = inner;
  if (rate < 1.0) {
    handle.run = [run = std::move(inner.run), rate](const KAryDataset& x,
                                                    RandomStream& rng) {
      return run(Subsample(x, rate, rng), rng);
    };
  }
  handle.expected_size = inner.expected_size / rate;
  if (inner.budget && !inner.budget->is_zcdp()) {
    const ApproxDp amplified = AmplifyBySubsampling(inner.budget->approx(), rate);
    handle.budget = PrivacyBudget::Approx(amplified.epsilon, amplified.delta);
  } else {
    handle.budget.reset();
  }
  return handle;
}

std::vector<Element> RandomPermutation(std::size_t k, RandomStream& rng) {
  std::vector<Element> perm(k);
  for (std::size_t j = 0; j < k; ++j) perm[j] = static_cast<Element>(j + 1);
  for (std::size_t j = k; j > 1; --j) {
    std::swap(perm[j - 1], perm[rng.NextBelow(j)]);
  }
  return perm;
}

SamplerHandle PermutationSymmetrized(SamplerHandle inner) {
  if (inner.k == 0) {
    throw ParameterError("PermutationSymmetrized: universe size unset");
  }
  if (inner.k == 1) return inner;
  SamplerHandle handle = inner;
  handle.run = [run = std::move(inner.run), k = inner.k](const KAryDataset& x,
                                                         RandomStream& rng) {
    if (x.k() != k) throw DimensionError("symmetrizer: universe size differs");
    const std::vector<Element> perm = RandomPermutation(k, rng);
    std::vector<Element> relabeled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) relabeled[i] = perm[x[i] - 1];
    const Element out = run(KAryDataset(std::move(relabeled), k), rng);
    for (std::size_t j = 0; j < k; ++j) {
      if (perm[j] == out) return static_cast<Element>(j + 1);
    }
    throw InternalError("symmetrizer: inner output outside the universe");
  };
  return handle;
}

}  // namespace dpsample
