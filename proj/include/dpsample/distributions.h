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

#ifndef DPSAMPLE_DISTRIBUTIONS_H_
#define DPSAMPLE_DISTRIBUTIONS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dpsample {

// Absolute tolerance on the sum of a probability vector.
inline constexpr double kSumTolerance = 1e-12;
// Inputs whose sum misses 1 by at most this much are renormalized; larger
// deviations are rejected.
inline constexpr double kRenormalizeTolerance = 1e-9;

// A distribution on {1, ..., k}, k >= 2. Index j of probs() holds the mass
// of element j + 1.
class KAryDistribution {
 public:
  explicit KAryDistribution(std::vector<double> probs);

  static KAryDistribution Uniform(std::size_t k);

  std::size_t k() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  // Mass of element `element` in {1..k}.
  double mass(std::size_t element) const { return probs_.at(element - 1); }

 private:
  std::vector<double> probs_;
};

// A product of d independent Bernoulli coordinates.
class ProductBernoulli {
 public:
  explicit ProductBernoulli(std::vector<double> biases);

  std::size_t d() const { return biases_.size(); }
  std::span<const double> biases() const { return biases_; }
  double bias(std::size_t j) const { return biases_.at(j); }

 private:
  std::vector<double> biases_;
};

// Half the L1 distance. Throws DimensionError when k differs.
double TvDistance(const KAryDistribution& p, const KAryDistribution& q);

// Same on raw probability vectors (e.g. empirical pmfs).
double TvDistance(std::span<const double> p, std::span<const double> q);

// Sum of per-coordinate Bernoulli TV distances, an upper bound on the TV
// distance between the two products. May exceed 1.
double TvProductUpperBound(const ProductBernoulli& p,
                           const ProductBernoulli& q);

}  // namespace dpsample

#endif  // DPSAMPLE_DISTRIBUTIONS_H_
