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
#include <vector>

#include "dpsample/errors.h"
#include "dpsample/random.h"
#include "gtest/gtest.h"

namespace dpsample {
namespace {

TEST(KAryDistributionTest, RejectsInvalidVectors) {
  EXPECT_THROW(KAryDistribution({1.0}), ParameterError);
  EXPECT_THROW(KAryDistribution({0.5, 0.6}), ParameterError);
  EXPECT_THROW(KAryDistribution({-0.1, 1.1}), ParameterError);
  EXPECT_THROW(KAryDistribution({0.5, 0.5 + 1e-6}), ParameterError);
}

TEST(KAryDistributionTest, RenormalizesTinyDrift) {
  const KAryDistribution p({0.5, 0.5 + 5e-10});
  EXPECT_NEAR(p.probs()[0] + p.probs()[1], 1.0, 1e-15);
}

TEST(KAryDistributionTest, UniformAndMass) {
  const KAryDistribution u = KAryDistribution::Uniform(4);
  EXPECT_EQ(u.k(), 4u);
  EXPECT_DOUBLE_EQ(u.mass(1), 0.25);
  EXPECT_DOUBLE_EQ(u.mass(4), 0.25);
}

TEST(ProductBernoulliTest, RejectsInvalidBiases) {
  EXPECT_THROW(ProductBernoulli({}), ParameterError);
  EXPECT_THROW(ProductBernoulli({0.5, 1.5}), ParameterError);
  EXPECT_NO_THROW(ProductBernoulli({0.0, 1.0}));
}

TEST(TvDistanceTest, Examples) {
  EXPECT_DOUBLE_EQ(TvDistance(KAryDistribution({0.5, 0.5}),
                              KAryDistribution({0.5, 0.5})),
                   0.0);
  EXPECT_DOUBLE_EQ(TvDistance(KAryDistribution({1.0, 0.0}),
                              KAryDistribution({0.0, 1.0})),
                   1.0);
  EXPECT_NEAR(TvDistance(KAryDistribution({0.7, 0.3}),
                         KAryDistribution({0.5, 0.5})),
              0.2, 1e-15);
}

TEST(TvDistanceTest, MismatchedSizesThrow) {
  EXPECT_THROW(TvDistance(KAryDistribution::Uniform(2),
                          KAryDistribution::Uniform(3)),
               DimensionError);
}

KAryDistribution RandomPmf(std::size_t k, RandomStream& rng) {
  std::vector<double> v(k);
  double total = 0.0;
  for (double& x : v) {
    x = rng.NextOpenUniform();
    total += x;
  }
  for (double& x : v) x /= total;
  return KAryDistribution(v);
}

TEST(TvDistanceTest, MetricPropertiesOnRandomTriples) {
  RandomStream rng(11, 0);
  for (int i = 0; i < 1000; ++i) {
    const KAryDistribution p = RandomPmf(6, rng);
    const KAryDistribution q = RandomPmf(6, rng);
    const KAryDistribution r = RandomPmf(6, rng);
    const double pq = TvDistance(p, q);
    ASSERT_GE(pq, 0.0);
    ASSERT_LE(pq, 1.0);
    ASSERT_DOUBLE_EQ(pq, TvDistance(q, p));
    ASSERT_LE(pq, TvDistance(p, r) + TvDistance(r, q) + 1e-12);
  }
  const KAryDistribution p = RandomPmf(6, rng);
  EXPECT_EQ(TvDistance(p, p), 0.0);
}

TEST(TvProductUpperBoundTest, Examples) {
  EXPECT_DOUBLE_EQ(TvProductUpperBound(ProductBernoulli({0.5, 0.5}),
                                       ProductBernoulli({0.5, 0.5})),
                   0.0);
  EXPECT_NEAR(TvProductUpperBound(ProductBernoulli({0.3, 0.3}),
                                  ProductBernoulli({0.5, 0.5})),
              0.4, 1e-15);
  EXPECT_DOUBLE_EQ(TvProductUpperBound(ProductBernoulli({1.0, 0.0}),
                                       ProductBernoulli({0.0, 1.0})),
                   2.0);
  EXPECT_THROW(TvProductUpperBound(ProductBernoulli({0.5}),
                                   ProductBernoulli({0.5, 0.5})),
               DimensionError);
}

}  // namespace
}  // namespace dpsample
