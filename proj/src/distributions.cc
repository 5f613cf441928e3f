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

#include "dpsample/distributions.h"

#include <cmath>
#include <numeric>
#include <string>

#include "dpsample/errors.h"

namespace dpsample {

KAryDistribution::KAryDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw DimensionError("KAryDistribution: k must be at least 2");
  }
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ParameterError("KAryDistribution: entry " + std::to_string(p) +
                           " outside [0, 1]");
    }
  }
  const double sum = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  const double deviation = std::abs(sum - 1.0);
  if (deviation > kRenormalizeTolerance) {
    throw ParameterError("KAryDistribution: entries sum to " +
                         std::to_string(sum));
  }
  if (deviation > kSumTolerance) {
    for (double& p : probs_) p /= sum;
  }
}

KAryDistribution KAryDistribution::Uniform(std::size_t k) {
  if (k < 2) throw DimensionError("KAryDistribution: k must be at least 2");
  return KAryDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

ProductBernoulli::ProductBernoulli(std::vector<double> biases)
    : biases_(std::move(biases)) {
  if (biases_.empty()) {
    throw DimensionError("ProductBernoulli: d must be at least 1");
  }
  for (double p : biases_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ParameterError("ProductBernoulli: bias " + std::to_string(p) +
                           " outside [0, 1]");
    }
  }
}

double TvDistance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw DimensionError("TvDistance: k mismatch (" + std::to_string(p.size()) +
                         " vs " + std::to_string(q.size()) + ")");
  }
  double l1 = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) l1 += std::abs(p[j] - q[j]);
  return 0.5 * l1;
}

double TvDistance(const KAryDistribution& p, const KAryDistribution& q) {
  return TvDistance(p.probs(), q.probs());
}

double TvProductUpperBound(const ProductBernoulli& p,
                           const ProductBernoulli& q) {
  if (p.d() != q.d()) {
    throw DimensionError("TvProductUpperBound: d mismatch (" +
                         std::to_string(p.d()) + " vs " +
                         std::to_string(q.d()) + ")");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < p.d(); ++j) {
    sum += std::abs(p.bias(j) - q.bias(j));
  }
  return sum;
}

}  // namespace dpsample
