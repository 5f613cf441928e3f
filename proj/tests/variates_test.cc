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

#include "dpsample/variates.h"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dpsample/errors.h"
#include "gtest/gtest.h"

namespace dpsample {
namespace {

TEST(PoissonTest, DegenerateAndInvalid) {
  RandomStream rng(1, 0);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(DrawPoisson(0.0, rng), 0u);
  EXPECT_THROW(DrawPoisson(-1.0, rng), ParameterError);
}

class PoissonMeanTest : public ::testing::TestWithParam<double> {};

TEST_P(PoissonMeanTest, MeanAndVarianceMatch) {
  const double lambda = GetParam();
  RandomStream rng(2, static_cast<std::uint64_t>(lambda * 10));
  constexpr int kDraws = 1000000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double x = static_cast<double>(DrawPoisson(lambda, rng));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / kDraws;
  EXPECT_NEAR(mean, lambda, 4.0 * std::sqrt(lambda / kDraws));
  EXPECT_NEAR(sum_sq / kDraws - mean * mean, lambda, 0.02 * lambda + 0.01);
}

// 0.5 and 5 use inversion; 50 and 500 the rejection sampler.
INSTANTIATE_TEST_SUITE_P(BothRegimes, PoissonMeanTest,
                         ::testing::Values(0.5, 5.0, 29.5, 30.0, 50.0, 500.0));

TEST(PoissonTest, SmallMeanPmfMatches) {
  RandomStream rng(3, 0);
  constexpr int kDraws = 500000;
  const double lambda = 2.0;
  std::vector<int> counts(8, 0);
  for (int i = 0; i < kDraws; ++i) {
    const auto x = DrawPoisson(lambda, rng);
    if (x < counts.size()) ++counts[x];
  }
  double pmf = std::exp(-lambda);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const double sd = std::sqrt(kDraws * pmf * (1 - pmf));
    EXPECT_NEAR(counts[j], kDraws * pmf, 4.0 * sd + 1.0) << "j=" << j;
    pmf *= lambda / static_cast<double>(j + 1);
  }
}

TEST(BinomialTest, DegenerateCases) {
  RandomStream rng(4, 0);
  for (int i = 0; i < 100; ++i) {
    ASSERT_EQ(DrawBinomial(10, 0.0, rng), 0u);
    ASSERT_EQ(DrawBinomial(10, 1.0, rng), 10u);
    ASSERT_EQ(DrawBinomial(0, 0.5, rng), 0u);
  }
  EXPECT_THROW(DrawBinomial(10, -0.1, rng), ParameterError);
  EXPECT_THROW(DrawBinomial(10, 1.1, rng), ParameterError);
}

struct BinomialCase {
  std::uint64_t n;
  double p;
};

class BinomialMomentsTest : public ::testing::TestWithParam<BinomialCase> {};

TEST_P(BinomialMomentsTest, MeanAndVarianceMatch) {
  const auto [n, p] = GetParam();
  RandomStream rng(5, n);
  constexpr int kDraws = 400000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const auto x = DrawBinomial(n, p, rng);
    ASSERT_LE(x, n);
    sum += static_cast<double>(x);
    sum_sq += static_cast<double>(x) * static_cast<double>(x);
  }
  const double mean = sum / kDraws;
  const double var = n * p * (1 - p);
  EXPECT_NEAR(mean, n * p, 4.0 * std::sqrt(var / kDraws));
  EXPECT_NEAR(sum_sq / kDraws - mean * mean, var, 0.02 * var + 0.01);
}

INSTANTIATE_TEST_SUITE_P(
    InversionAndRejection, BinomialMomentsTest,
    ::testing::Values(BinomialCase{10, 0.3}, BinomialCase{50, 0.1},
                      BinomialCase{100, 0.5}, BinomialCase{1000, 0.9},
                      BinomialCase{100000, 0.02}));

TEST(MultinomialTest, SingleCellGetsEverything) {
  RandomStream rng(6, 0);
  const std::vector<double> probs = {1.0};
  EXPECT_EQ(DrawMultinomial(3, probs, rng), (std::vector<std::uint64_t>{3}));
}

TEST(MultinomialTest, RejectsBadCells) {
  RandomStream rng(6, 1);
  const std::vector<double> over = {0.6, 0.6};
  const std::vector<double> negative = {-0.1, 0.5};
  EXPECT_THROW(DrawMultinomial(3, over, rng), ParameterError);
  EXPECT_THROW(DrawMultinomial(3, negative, rng), ParameterError);
}

TEST(MultinomialTest, MarginalsMatchWithDiscardCell) {
  RandomStream rng(7, 0);
  const std::vector<double> probs = {0.1, 0.3, 0.2};  // 0.4 discarded
  constexpr int kReps = 100000;
  constexpr std::uint64_t kTrials = 20;
  std::vector<double> sums(3, 0.0);
  for (int i = 0; i < kReps; ++i) {
    const auto counts = DrawMultinomial(kTrials, probs, rng);
    ASSERT_LE(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}),
              kTrials);
    for (int j = 0; j < 3; ++j) sums[j] += static_cast<double>(counts[j]);
  }
  for (int j = 0; j < 3; ++j) {
    const double se = std::sqrt(kTrials * probs[j] * (1 - probs[j]) / kReps);
    EXPECT_NEAR(sums[j] / kReps, kTrials * probs[j], 4.0 * se);
  }
}

TEST(EqualCellMultinomialTest, MatchesDenseLaw) {
  RandomStream rng(8, 0);
  constexpr std::uint64_t kCells = 5;
  constexpr double kCellProb = 2.0 / 11.0;  // 5 cells, residual 1/11
  constexpr int kReps = 100000;
  constexpr std::uint64_t kTrials = 7;
  std::vector<double> sums(kCells, 0.0);
  double kept = 0.0;
  for (int i = 0; i < kReps; ++i) {
    const auto hits = DrawEqualCellMultinomial(kTrials, kCells, kCellProb, rng);
    ASSERT_LE(hits.size(), kTrials);
    kept += static_cast<double>(hits.size());
    for (auto h : hits) {
      ASSERT_LT(h, kCells);
      sums[h] += 1.0;
    }
  }
  for (std::uint64_t j = 0; j < kCells; ++j) {
    const double se = std::sqrt(kTrials * kCellProb * (1 - kCellProb) / kReps);
    EXPECT_NEAR(sums[j] / kReps, kTrials * kCellProb, 4.0 * se);
  }
  const double keep = kCells * kCellProb;
  EXPECT_NEAR(kept / kReps, kTrials * keep,
              4.0 * std::sqrt(kTrials * keep * (1 - keep) / kReps));
}

TEST(DrawKaryTest, FrequenciesMatch) {
  const KAryDistribution p({0.5, 0.2, 0.2, 0.1});
  const AliasTable table(p);
  RandomStream rng(9, 0);
  constexpr int kDraws = 400000;
  std::vector<int> direct(4, 0);
  std::vector<int> alias(4, 0);
  for (int i = 0; i < kDraws; ++i) {
    ++direct[DrawKary(p, rng) - 1];
    ++alias[table.Draw(rng) - 1];
  }
  for (int j = 0; j < 4; ++j) {
    const double pj = p.probs()[j];
    const double sd = std::sqrt(kDraws * pj * (1 - pj));
    EXPECT_NEAR(direct[j], kDraws * pj, 4.0 * sd);
    EXPECT_NEAR(alias[j], kDraws * pj, 4.0 * sd);
  }
}

TEST(DrawBinaryDatasetTest, ColumnMeansAndTailBitsClear) {
  const ProductBernoulli p({0.0, 0.5, 0.9, 1.0, 0.03});
  RandomStream rng(10, 0);
  const BinaryDataset x = DrawBinaryDataset(p, 100001, rng);
  const BinaryView view(x);
  for (std::size_t j = 0; j < p.d(); ++j) {
    const double q = p.bias(j);
    const double mean = static_cast<double>(view.ColumnCount(j)) / 100001.0;
    EXPECT_NEAR(mean, q, 4.0 * std::sqrt(q * (1 - q) / 100001.0) + 1e-12);
    const std::uint64_t last = x.column(j).back();
    EXPECT_EQ(last >> (100001 % 64), 0u) << "bits past the last row";
  }
}

TEST(DrawBinaryDatasetTest, RowsLookIndependent) {
  // Two rows placed by the count-then-shuffle method: their bits in one
  // column must be uncorrelated.
  RandomStream rng(11, 0);
  const ProductBernoulli p({0.3});
  constexpr int kReps = 50000;
  int both = 0;
  int first = 0;
  int second = 0;
  for (int i = 0; i < kReps; ++i) {
    const BinaryDataset x = DrawBinaryDataset(p, 3, rng);
    first += x.Get(0, 0);
    second += x.Get(2, 0);
    both += x.Get(0, 0) && x.Get(2, 0);
  }
  EXPECT_NEAR(static_cast<double>(both) / kReps, 0.09,
              4.0 * std::sqrt(0.09 * 0.91 / kReps));
  EXPECT_NEAR(static_cast<double>(first) / kReps, 0.3,
              4.0 * std::sqrt(0.21 / kReps));
  EXPECT_NEAR(static_cast<double>(second) / kReps, 0.3,
              4.0 * std::sqrt(0.21 / kReps));
}

TEST(VariatesTest, DeterministicGivenStream) {
  RandomStream a(12, 3);
  RandomStream b(12, 3);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(DrawPoisson(40.0, a), DrawPoisson(40.0, b));
    ASSERT_EQ(DrawBinomial(500, 0.3, a), DrawBinomial(500, 0.3, b));
  }
}

}  // namespace
}  // namespace dpsample
