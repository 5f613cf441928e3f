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

#include "dpsample/reductions.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "dpsample/errors.h"
#include "dpsample/mechanisms.h"
#include "dpsample/variates.h"

namespace dpsample {
namespace {

BinaryDataset CopyRows(const BinaryDataset& x, std::size_t begin,
                       std::size_t count) {
  BinaryDataset out(count, x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    BinaryView(x, begin, count).ForEachRowWith(
        c, true, [&](std::size_t row) { out.Set(row, c, true); });
  }
  return out;
}

}  // namespace

StarDistribution::StarDistribution(std::size_t k, Element special,
                                   std::vector<Element> support,
                                   double alpha_star)
    : k_(k),
      special_(special),
      support_(std::move(support)),
      alpha_star_(alpha_star) {
  if (k_ == 0) throw ParameterError("StarDistribution: k must be positive");
  if (special_ < 1 || special_ > universe()) {
    throw ParameterError("StarDistribution: special element outside universe");
  }
  if (!(alpha_star_ > 0.0 && alpha_star_ < 1.0)) {
    throw ParameterError("StarDistribution: alpha_star must lie in (0, 1)");
  }
  if (support_.size() != k_) {
    throw ParameterError("StarDistribution: support must have exactly k elements");
  }
  std::sort(support_.begin(), support_.end());
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const Element e = support_[i];
    if (e < 1 || e > universe() || e == special_ ||
        (i > 0 && support_[i - 1] == e)) {
      throw ParameterError("StarDistribution: invalid support element " +
                           std::to_string(e));
    }
  }
}

StarDistribution StarDistribution::Canonical(std::size_t k,
                                             double alpha_star) {
  std::vector<Element> support(k);
  for (std::size_t i = 0; i < k; ++i) support[i] = static_cast<Element>(i + 1);
  return StarDistribution(k, static_cast<Element>(2 * k + 1),
                          std::move(support), alpha_star);
}

KAryDistribution StarDistribution::ToKary() const {
  std::vector<double> probs(universe(), 0.0);
  probs[special_ - 1] = 1.0 - alpha_star_;
  for (Element e : support_) {
    probs[e - 1] = alpha_star_ / static_cast<double>(k_);
  }
  return KAryDistribution(std::move(probs));
}

std::size_t SkipCoordinate(Element e, Element s) {
  if (e == s) throw ParameterError("SkipCoordinate: element equals s");
  return e < s ? e - 1 : e - 2;
}

ProductBernoulli StarToProduct(const StarDistribution& p) {
  std::vector<double> biases(2 * p.k(), 0.0);
  const double mass = p.alpha_star() / static_cast<double>(p.k());
  for (Element e : p.support()) biases[SkipCoordinate(e, p.special())] = mass;
  return ProductBernoulli(std::move(biases));
}

Element PickSpecialElement(const KAryDataset& x, double epsilon,
                           RandomStream& rng) {
  if (x.empty()) throw ParameterError("PickSpecialElement: empty dataset");
  const std::vector<std::uint64_t> counts = x.Histogram();
  return static_cast<Element>(ExponentialSelect(counts, epsilon, rng) + 1);
}

double ZeroingProbability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParameterError("ZeroingProbability: p must lie in (0, 1)");
  }
  return 1.0 - p / -std::expm1(-2.0 * p);
}

BinaryDataset DatasetTransform(const KAryDataset& x, std::size_t k,
                               std::size_t n, double alpha_star, Element s,
                               RandomStream& rng) {
  if (k == 0) throw ParameterError("DatasetTransform: k must be positive");
  if (x.k() != 2 * k + 1) {
    throw DimensionError("DatasetTransform: universe must have 2k + 1 elements");
  }
  if (s < 1 || s > 2 * k + 1) {
    throw ParameterError("DatasetTransform: special element outside universe");
  }
  if (n < 2) throw ParameterError("DatasetTransform: n must be at least 2");
  if (!(alpha_star > 0.0 && alpha_star < 1.0)) {
    throw ParameterError("DatasetTransform: alpha_star must lie in (0, 1)");
  }
  const double p = alpha_star / static_cast<double>(k);
  if (1.0 - p - std::exp(-2.0 * p) < 0.0) {
    throw InternalError("DatasetTransform: zeroing probability below 0");
  }
  const double zero_prob = ZeroingProbability(p);
  const std::size_t cells = n / 2;
  const double cell_prob = 2.0 / static_cast<double>(n);

  const std::vector<std::uint64_t> histogram = x.Histogram();
  BinaryDataset out(cells, 2 * k);
  const std::uint64_t family = rng.NextU64();
  for (Element e = 1; e <= 2 * k + 1; ++e) {
    if (e == s || histogram[e - 1] == 0) continue;
    RandomStream column_rng = rng.Child(family, e);
    std::vector<std::uint64_t> hits = DrawEqualCellMultinomial(
        histogram[e - 1], cells, cell_prob, column_rng);
    // Capping at 1 keeps one entry per occupied cell.
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    const std::size_t column = SkipCoordinate(e, s);
    for (std::uint64_t cell : hits) {
      if (!column_rng.NextBernoulli(zero_prob)) out.Set(cell, column, true);
    }
  }
  return out;
}

Element UniverseTransform(std::span<const std::uint8_t> b, Element s,
                          RandomStream& rng) {
  if (s < 1 || s > b.size() + 1) {
    throw ParameterError("UniverseTransform: special element outside universe");
  }
  std::vector<Element> candidates;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j] == 0) continue;
    const Element e = static_cast<Element>(j + 1);
    candidates.push_back(e < s ? e : e + 1);
  }
  if (candidates.empty()) return s;
  return candidates[rng.NextBelow(candidates.size())];
}

double ReducedPickerMean(const ReducedSamplerParams& params) {
  return 2.0 * params.c * std::log(static_cast<double>(params.k)) /
         (params.alpha * params.epsilon);
}

std::size_t ReducedTransformSize(const ReducedSamplerParams& params) {
  const double rest = params.n - ReducedPickerMean(params);
  return rest > 0.0 ? static_cast<std::size_t>(std::floor(rest)) : 0;
}

Element ReducedKarySample(const KAryDataset& x,
                          const ReducedSamplerParams& params,
                          const ProductSamplerHandle& inner,
                          RandomStream& rng) {
  const std::size_t k = params.k;
  if (k < 2) throw ParameterError("ReducedKarySample: k must be at least 2");
  if (!(params.epsilon > 0.0)) {
    throw ParameterError("ReducedKarySample: epsilon must be positive");
  }
  if (!(params.alpha > 0.0 && 60.0 * params.alpha < 1.0)) {
    throw ParameterError("ReducedKarySample: alpha must lie in (0, 1/60)");
  }
  if (!(params.c > 0.0)) throw ParameterError("ReducedKarySample: C must be positive");
  if (x.k() != 2 * k + 1) {
    throw DimensionError("ReducedKarySample: universe must have 2k + 1 elements");
  }
  if (inner.d != 0 && inner.d != 2 * k) {
    throw DimensionError("ReducedKarySample: inner sampler must have 2k coordinates");
  }
  const double picker_mean = ReducedPickerMean(params);
  if (!(params.n > picker_mean) || ReducedTransformSize(params) < 2) {
    throw ParameterError("ReducedKarySample: n too small for the picker split");
  }
  const Element fallback = static_cast<Element>(2 * k + 1);
  const std::uint64_t picker_size =
      DrawBinomial(x.size(), picker_mean / params.n, rng);
  if (static_cast<double>(picker_size) < picker_mean / 2.0) return fallback;

  const auto records = x.records();
  const KAryDataset picker_part(
      std::vector<Element>(records.begin(), records.begin() + picker_size),
      x.k());
  const KAryDataset transform_part(
      std::vector<Element>(records.begin() + picker_size, records.end()),
      x.k());
  const Element s = PickSpecialElement(picker_part, params.epsilon / 2.0, rng);
  const BinaryDataset y =
      DatasetTransform(transform_part, k, ReducedTransformSize(params),
                       60.0 * params.alpha, s, rng);
  const std::vector<std::uint8_t> b = inner(y, rng);
  if (b.size() != 2 * k) {
    throw DimensionError("ReducedKarySample: inner output has wrong length");
  }
  return UniverseTransform(b, s, rng);
}

std::size_t MarginalSampleCount(double alpha, double beta0, double gamma0) {
  if (!(alpha > 0.0 && beta0 > 0.0 && gamma0 > 0.0)) {
    throw ParameterError("MarginalSampleCount: parameters must be positive");
  }
  return static_cast<std::size_t>(std::ceil(
      std::log(2.0 / (beta0 * gamma0)) / (2.0 * alpha * alpha) - 1e-9));
}

std::vector<double> MarginalEstimateViaSampler(
    const BinaryDataset& x, std::size_t c, const ProductSamplerHandle& sampler,
    RandomStream& rng) {
  if (c == 0) throw ParameterError("MarginalEstimate: c must be positive");
  if (c > x.rows()) {
    throw ParameterError("MarginalEstimate: c exceeds the row count");
  }
  const std::size_t part = x.rows() / c;
  std::vector<double> sums(x.cols(), 0.0);
  for (std::size_t i = 0; i < c; ++i) {
    const std::vector<std::uint8_t> y = sampler(CopyRows(x, i * part, part), rng);
    if (y.size() != x.cols()) {
      throw DimensionError("MarginalEstimate: sampler output has wrong length");
    }
    for (std::size_t j = 0; j < y.size(); ++j) sums[j] += y[j];
  }
  for (double& s : sums) s /= static_cast<double>(c);
  return sums;
}

BinaryDataset BinarySymmetricChannel(const BinaryDataset& x,
                                     RandomStream& rng) {
  BinaryDataset noise(x.rows(), x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    FillBernoulliColumn(noise, c, 0, x.rows(), 1.0 / 3.0, rng);
  }
  BinaryDataset out = x;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    auto dst = out.mutable_column(c);
    const auto src = noise.column(c);
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
  }
  return out;
}

double ChannelBias(double p) { return (p + 1.0) / 3.0; }

double RescaleChannelEstimate(double q) { return 3.0 * q - 1.0; }

std::vector<double> MarginalEstimateGeneral(const BinaryDataset& x,
                                            const MarginalEstimatorFn& estimator,
                                            RandomStream& rng) {
  std::vector<double> estimates = estimator(BinarySymmetricChannel(x, rng), rng);
  for (double& q : estimates) q = RescaleChannelEstimate(q);
  return estimates;
}

}  // namespace dpsample
