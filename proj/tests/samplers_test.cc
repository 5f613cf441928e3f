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

#include "dpsample/samplers.h"

#include <cmath>
#include <vector>

#include "dpsample/errors.h"
#include "dpsample/variates.h"
#include "gtest/gtest.h"

namespace dpsample {
namespace {

KAryDataset Repeat(std::size_t k, Element e, std::size_t n) {
  return KAryDataset(std::vector<Element>(n, e), k);
}

TEST(KarySamplerTest, RequiredSize) {
  EXPECT_EQ(KaryRequiredSize(10, 0.1, 1.0), 200u);
  EXPECT_EQ(KaryRequiredSize(3, 0.5, 0.7), 18u);  // 17.14...
  EXPECT_THROW(KaryRequiredSize(3, 0.0, 1.0), ParameterError);
}

TEST(KarySamplerTest, Validation) {
  RandomStream rng(1, 0);
  const KAryDataset empty(std::vector<Element>{}, 3);
  EXPECT_THROW(KarySample(empty, 1.0, rng), ParameterError);
  EXPECT_THROW(KarySample(Repeat(3, 1, 10), 0.0, rng), ParameterError);
}

TEST(KarySamplerTest, HugeEpsilonReturnsTheOnlyElement) {
  RandomStream rng(2, 0);
  const KAryDataset x = Repeat(4, 3, 50);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(KarySample(x, 1e6, rng), 3u);
}

TEST(KarySamplerTest, OutputsInRangeAndEstimateIsDistribution) {
  RandomStream rng(3, 0);
  const KAryDataset x({1, 2, 2, 3, 5, 5, 5}, 5);
  for (int i = 0; i < 2000; ++i) {
    const KAryDistribution q = KaryNoisyEstimate(x, 0.3, rng);
    double sum = 0.0;
    for (double v : q.probs()) {
      ASSERT_GE(v, 0.0);
      sum += v;
    }
    ASSERT_NEAR(sum, 1.0, 1e-12);
    const Element e = KarySample(x, 0.3, rng);
    ASSERT_GE(e, 1u);
    ASSERT_LE(e, 5u);
  }
}

TEST(KarySamplerTest, BalancedDatasetGivesUniformOutput) {
  // Laplace noise is symmetric and the dataset is exchangeable over labels,
  // so the output law is exactly uniform.
  RandomStream rng(4, 0);
  const KAryDataset x({1, 2, 3, 4, 1, 2, 3, 4}, 4);
  constexpr int kRuns = 200000;
  std::vector<int> hits(5, 0);
  for (int i = 0; i < kRuns; ++i) ++hits[KarySample(x, 0.5, rng)];
  const double sd = std::sqrt(kRuns * 0.25 * 0.75);
  for (int e = 1; e <= 4; ++e) EXPECT_NEAR(hits[e], kRuns / 4.0, 4 * sd);
}

TEST(ClipBernoulliTest, ClipBiasExamples) {
  const std::vector<std::uint8_t> all_ones(10, 1);
  const std::vector<std::uint8_t> all_zeros(10, 0);
  const std::vector<std::uint8_t> mixed = {1, 0, 1, 0, 1};
  EXPECT_DOUBLE_EQ(ClipBias(all_ones), 0.75);
  EXPECT_DOUBLE_EQ(ClipBias(all_zeros), 0.25);
  EXPECT_DOUBLE_EQ(ClipBias(mixed), 0.6);
  EXPECT_DOUBLE_EQ(ClipBiasFromCount(3, 10), 0.3);
  const std::vector<std::uint8_t> bad = {0, 2};
  EXPECT_THROW(ClipBias(bad), ParameterError);
  EXPECT_THROW(ClipBiasFromCount(0, 0), ParameterError);
  EXPECT_THROW(ClipBiasFromCount(4, 3), ParameterError);
}

TEST(ClipBernoulliTest, RequiredSize) {
  // 72 ln(120) = 344.7 dominates 4 / 1.
  EXPECT_EQ(ClipBernoulliRequiredSize(0.05, 1.0), 345u);
  // 4 / 0.01 = 400 dominates 72 ln 60 = 294.8.
  EXPECT_EQ(ClipBernoulliRequiredSize(0.1, 0.01), 400u);
  EXPECT_THROW(ClipBernoulliRequiredSize(0.0, 1.0), ParameterError);
}

TEST(ClipBernoulliTest, SampleFrequencyMatchesClippedBias) {
  RandomStream rng(5, 0);
  const std::vector<std::uint8_t> ones(7, 1);
  constexpr int kRuns = 200000;
  int hits = 0;
  for (int i = 0; i < kRuns; ++i) hits += ClipBernoulliSample(ones, rng);
  EXPECT_NEAR(static_cast<double>(hits) / kRuns, 0.75,
              4 * std::sqrt(0.75 * 0.25 / kRuns));
}

TEST(ClipProductTest, PrivacyAndSize) {
  EXPECT_DOUBLE_EQ(ClipProductZcdp(10, 20), 0.2);
  EXPECT_THROW(ClipProductZcdp(10, 0), ParameterError);
  // max(ceil(72 ln 600) = 461, ceil(sqrt(800)) = 29).
  EXPECT_EQ(ClipProductRequiredSize(10, 0.1, 0.1), 461u);
  // sqrt(8 * 100 / 0.001) = 894.4 dominates 72 ln 6000 = 626.4.
  EXPECT_EQ(ClipProductRequiredSize(100, 0.1, 0.001), 895u);
}

TEST(ClipProductTest, ConstantZeroColumnsGiveQuarter) {
  RandomStream rng(6, 0);
  const BinaryDataset x(30, 8);
  constexpr int kRuns = 50000;
  std::vector<int> hits(8, 0);
  for (int i = 0; i < kRuns; ++i) {
    const auto y = ClipProductSample(x, rng);
    ASSERT_EQ(y.size(), 8u);
    for (std::size_t j = 0; j < 8; ++j) hits[j] += y[j];
  }
  const double sd = std::sqrt(kRuns * 0.25 * 0.75);
  for (int h : hits) EXPECT_NEAR(h, kRuns * 0.25, 4 * sd);
  EXPECT_THROW(ClipProductSample(BinaryDataset(0, 3), rng), ParameterError);
}

TEST(ProdSamplerTest, Rounds) {
  EXPECT_EQ(ProdRounds(1), 1u);
  EXPECT_EQ(ProdRounds(64), 1u);
  EXPECT_EQ(ProdRounds(80), 1u);
  EXPECT_EQ(ProdRounds(81), 2u);
  EXPECT_EQ(ProdRounds(160), 2u);
  EXPECT_EQ(ProdRounds(161), 3u);
  EXPECT_EQ(ProdRounds(1000), 5u);
  EXPECT_THROW(ProdRounds(0), ParameterError);
}

TEST(ProdSamplerTest, RecordsPerRoundFormula) {
  const ProdSamplerConfig cfg = ProdSamplerConfig::ForAccuracy(0.25, 1.0, 64);
  EXPECT_DOUBLE_EQ(cfg.beta, 0.25 / 768.0);
  const double s = std::sqrt(2.0);
  const double want = 1200.0 * 64.0 / (0.25 * s) *
                      std::pow(std::log(64.0 / (0.25 * cfg.beta * s)), 1.25);
  EXPECT_NEAR(ProdRecordsPerRound(64, cfg), want, want * 1e-12);
  EXPECT_EQ(ProdRequiredRows(64, cfg),
            4 * static_cast<std::size_t>(std::ceil(want)));
  ProdSamplerConfig small = cfg;
  small.constant_scale = 0.5;
  EXPECT_NEAR(ProdRecordsPerRound(64, small), want / 2, want * 1e-12);
  EXPECT_FALSE(ProdUsesRecursion(63, cfg));
  EXPECT_TRUE(ProdUsesRecursion(64, cfg));
}

TEST(ProdSamplerTest, ConfigValidation) {
  ProdSamplerConfig cfg;
  cfg.rho = 0.0;
  EXPECT_THROW(cfg.Validate(), ParameterError);
  cfg = ProdSamplerConfig();
  cfg.beta = 1.0;
  EXPECT_THROW(cfg.Validate(), ParameterError);
  cfg = ProdSamplerConfig();
  cfg.alpha = 1.5;
  EXPECT_THROW(cfg.Validate(), ParameterError);
  cfg = ProdSamplerConfig();
  cfg.constant_scale = 0.0;
  EXPECT_THROW(cfg.Validate(), ParameterError);
}

TEST(ProdSamplerTest, InsufficientRows) {
  RandomStream rng(7, 0);
  const ProdSamplerConfig cfg = ProdSamplerConfig::ForAccuracy(0.5, 1.0, 8, 0.01);
  const std::size_t need = ProdRequiredRows(8, cfg);
  EXPECT_THROW(ProdSample(BinaryDataset(need - 1, 8), cfg, rng), ParameterError);
  EXPECT_NO_THROW(ProdSample(BinaryDataset(need, 8), cfg, rng));
}

TEST(ProdSamplerTest, FallbackOnAllZerosIsMostlyZero) {
  RandomStream rng(8, 0);
  ProdSamplerConfig cfg = ProdSamplerConfig::ForAccuracy(0.5, 1.0, 4);
  const std::size_t n = ProdRequiredRows(4, cfg);
  const BinaryDataset x(n, 4);
  int ones = 0;
  for (int i = 0; i < 200; ++i) {
    const ProdSampleTrace t = ProdSampleTraced(x, cfg, rng);
    EXPECT_FALSE(t.recursive);
    for (std::uint8_t b : t.output) ones += b;
    for (double e : t.estimates) ASSERT_LT(std::abs(e), 0.01);
  }
  EXPECT_LE(ones, 20);
}

TEST(ProdSamplerTest, BucketingStructure) {
  RandomStream rng(9, 0);
  constexpr std::size_t d = 96;  // R = 2.
  ProdSamplerConfig cfg = ProdSamplerConfig::ForAccuracy(0.5, 1.0, d, 0.002);
  const std::size_t m = static_cast<std::size_t>(std::ceil(ProdRecordsPerRound(d, cfg)));
  std::vector<double> p(d);
  for (std::size_t j = 0; j < d; ++j) p[j] = j % 3 == 0 ? 0.85 : (j % 3 == 1 ? 0.3 : 0.0);
  const BinaryDataset x = DrawBinaryDataset(ProductBernoulli(p), 3 * m, rng);
  const BucketingState s = ProdBucketingPhase(BinaryView(x), cfg, rng);
  ASSERT_EQ(s.rounds, 2u);
  EXPECT_EQ(s.records_per_round, m);
  EXPECT_DOUBLE_EQ(s.tau[1], 3.0 / 16.0);
  EXPECT_DOUBLE_EQ(s.tau[2], 3.0 / 32.0);
  EXPECT_DOUBLE_EQ(s.u[1], 0.5);
  EXPECT_DOUBLE_EQ(s.u[3], 0.5);
  EXPECT_DOUBLE_EQ(s.u[5], 20.0 / d);
  const double log_term = std::log(static_cast<double>(m) * 2 / cfg.beta);
  EXPECT_NEAR(s.ceilings[1], std::sqrt(6.0 * 0.5 * d * log_term), 1e-9);
  EXPECT_NEAR(s.ceilings[5],
              std::sqrt(200.0 * std::log(static_cast<double>(m) / cfg.beta)), 1e-9);
  std::size_t total = 0;
  for (std::size_t r = 3; r <= 5; ++r) total += s.buckets[r].size();
  EXPECT_EQ(total, d);
  for (std::size_t j = 0; j < d; ++j) {
    ASSERT_GE(s.bucket_of[j], 3u);
    ASSERT_LE(s.bucket_of[j], 5u);
    if (j % 3 == 0) EXPECT_EQ(s.flips[j], 1) << j;
    if (j % 3 != 0) EXPECT_EQ(s.flips[j], 0) << j;
    // Oriented bias 0.3 clears tau_1 = 3/16, 0.15 only tau_2 = 3/32; zero
    // columns clear neither.
    if (j % 3 == 0) EXPECT_EQ(s.bucket_of[j], 4u) << j;
    if (j % 3 == 1) EXPECT_EQ(s.bucket_of[j], 3u) << j;
    if (j % 3 == 2) EXPECT_EQ(s.bucket_of[j], 5u) << j;
  }
  EXPECT_THROW(ProdBucketingPhase(BinaryView(BinaryDataset(10, 8)), cfg, rng),
               ParameterError);
}

TEST(ProdSamplerTest, DeterministicForFixedStream) {
  ProdSamplerConfig cfg = ProdSamplerConfig::ForAccuracy(0.5, 1.0, 64, 0.001);
  RandomStream data_rng(10, 0);
  std::vector<double> p(64, 0.2);
  const BinaryDataset x =
      DrawBinaryDataset(ProductBernoulli(p), ProdRequiredRows(64, cfg), data_rng);
  RandomStream a(11, 3);
  RandomStream b(11, 3);
  EXPECT_EQ(ProdSample(x, cfg, a), ProdSample(x, cfg, b));
}

}  // namespace
}  // namespace dpsample
