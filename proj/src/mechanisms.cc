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

#include "dpsample/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dpsample/errors.h"

namespace dpsample {
namespace {

bool Flipped(std::span<const std::uint8_t> flips, std::size_t column) {
  return !flips.empty() && flips[column] != 0;
}

void CheckColumns(const BinaryView& rows, std::span<const std::size_t> columns,
                  std::span<const std::uint8_t> flips) {
  for (std::size_t c : columns) {
    if (c >= rows.cols()) {
      throw DimensionError("column " + std::to_string(c) + " out of range");
    }
  }
  if (!flips.empty() && flips.size() != rows.cols()) {
    throw DimensionError("flip mask length differs from column count");
  }
}

// Squared L2 norm of every row restricted to `columns`.
std::vector<std::uint32_t> RowNormsSquared(
    const BinaryView& rows, std::span<const std::size_t> columns,
    std::span<const std::uint8_t> flips) {
  std::vector<std::uint32_t> norms(rows.rows(), 0);
  for (std::size_t c : columns) {
    rows.ForEachRowWith(c, !Flipped(flips, c),
                        [&](std::size_t row) { ++norms[row]; });
  }
  return norms;
}

}  // namespace

TruncationCeiling::TruncationCeiling(double value) : value_(value) {
  if (!(value > 0.0)) {
    throw ParameterError("truncation ceiling must be positive");
  }
}

double LaplaceNoise(double scale, RandomStream& rng) {
  if (!(scale > 0.0)) throw ParameterError("Laplace scale must be positive");
  const double u = rng.NextOpenUniform() - 0.5;
  return -scale * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
}

double GaussianNoise(double sigma, RandomStream& rng) {
  if (!(sigma > 0.0)) throw ParameterError("Gaussian sigma must be positive");
  for (;;) {
    const double u = 2.0 * rng.NextUniform() - 1.0;
    const double v = 2.0 * rng.NextUniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return sigma * u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

double GumbelNoise(RandomStream& rng) {
  return -std::log(-std::log(rng.NextOpenUniform()));
}

KAryDistribution ProjectL1Simplex(std::span<const double> v) {
  if (v.size() < 2) {
    throw DimensionError("ProjectL1Simplex: k must be at least 2");
  }
  std::vector<double> clamped(v.size());
  double positive_mass = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    clamped[j] = v[j] > 0.0 ? v[j] : 0.0;
    positive_mass += clamped[j];
  }
  if (!(positive_mass > 0.0)) return KAryDistribution::Uniform(v.size());
  for (double& x : clamped) x /= positive_mass;
  // Division can leave an entry a hair above 1 when a single entry carries
  // all the mass.
  for (double& x : clamped) x = std::min(x, 1.0);
  return KAryDistribution(std::move(clamped));
}

std::vector<double> TruncatedMean(const BinaryView& rows,
                                  std::span<const std::size_t> columns,
                                  TruncationCeiling ceiling,
                                  std::span<const std::uint8_t> flips) {
  if (rows.rows() == 0) throw ParameterError("TruncatedMean: no rows");
  CheckColumns(rows, columns, flips);
  const double n = static_cast<double>(rows.rows());
  std::vector<double> sums(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const std::uint64_t ones = rows.ColumnCount(columns[i]);
    sums[i] = static_cast<double>(Flipped(flips, columns[i]) ? rows.rows() - ones
                                                             : ones);
  }
  const double bound = ceiling.value();
  // A binary row's norm is at most sqrt(|columns|).
  if (bound * bound < static_cast<double>(columns.size())) {
    const std::vector<std::uint32_t> norms = RowNormsSquared(rows, columns, flips);
    for (std::size_t row = 0; row < norms.size(); ++row) {
      const double norm = std::sqrt(static_cast<double>(norms[row]));
      if (norm <= bound) continue;
      const double lost = 1.0 - bound / norm;
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (rows.Get(row, columns[i]) != Flipped(flips, columns[i])) {
          sums[i] -= lost;
        }
      }
    }
  }
  for (double& s : sums) s = std::clamp(s / n, 0.0, 1.0);
  return sums;
}

std::size_t CountTruncatedRows(const BinaryView& rows,
                               std::span<const std::size_t> columns,
                               TruncationCeiling ceiling,
                               std::span<const std::uint8_t> flips) {
  CheckColumns(rows, columns, flips);
  const double bound_sq = ceiling.value() * ceiling.value();
  if (bound_sq >= static_cast<double>(columns.size())) return 0;
  const std::vector<std::uint32_t> norms = RowNormsSquared(rows, columns, flips);
  return static_cast<std::size_t>(
      std::count_if(norms.begin(), norms.end(), [&](std::uint32_t sq) {
        return static_cast<double>(sq) > bound_sq;
      }));
}

std::size_t ExponentialSelect(std::span<const std::uint64_t> counts,
                              double epsilon, RandomStream& rng) {
  if (counts.empty()) {
    throw ParameterError("ExponentialSelect: empty candidate list");
  }
  if (!(epsilon > 0.0)) {
    throw ParameterError("ExponentialSelect: epsilon must be positive");
  }
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const double score =
        0.5 * epsilon * static_cast<double>(counts[j]) + GumbelNoise(rng);
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

std::vector<double> ExponentialSelectProbabilities(
    std::span<const std::uint64_t> counts, double epsilon) {
  if (counts.empty()) {
    throw ParameterError("ExponentialSelect: empty candidate list");
  }
  const std::uint64_t top = *std::max_element(counts.begin(), counts.end());
  std::vector<double> weights(counts.size());
  double total = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    weights[j] = std::exp(0.5 * epsilon *
                          (static_cast<double>(counts[j]) -
                           static_cast<double>(top)));
    total += weights[j];
  }
  for (double& w : weights) w /= total;
  return weights;
}

double ClipInterval(double x, double lo, double hi) {
  if (lo > hi) throw ParameterError("ClipInterval: lo exceeds hi");
  return std::clamp(x, lo, hi);
}

}  // namespace dpsample
