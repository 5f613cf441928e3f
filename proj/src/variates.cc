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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dpsample/errors.h"

namespace dpsample {
namespace {

std::uint64_t PoissonInversion(double lambda, RandomStream& rng) {
  // Sequential search; the guard bounds the loop if rounding leaves the
  // accumulated mass short of u.
  const double u = rng.NextUniform();
  double term = std::exp(-lambda);
  double cumulative = term;
  std::uint64_t x = 0;
  while (u > cumulative && x < 1000) {
    ++x;
    term *= lambda / static_cast<double>(x);
    cumulative += term;
  }
  return x;
}

// Hoermann's PTRS transformed rejection with squeeze.
std::uint64_t PoissonPtrs(double lambda, RandomStream& rng) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.NextUniform() - 0.5;
    const double v = rng.NextUniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -lambda + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

std::uint64_t BinomialInversion(std::uint64_t n, double p, RandomStream& rng) {
  const double q = 1.0 - p;
  const double qn = std::exp(static_cast<double>(n) * std::log1p(-p));
  const double np = static_cast<double>(n) * p;
  const double bound =
      std::min(static_cast<double>(n), np + 10.0 * std::sqrt(np * q + 1.0));
  std::uint64_t x = 0;
  double px = qn;
  double u = rng.NextUniform();
  while (u > px) {
    ++x;
    if (static_cast<double>(x) > bound) {
      x = 0;
      px = qn;
      u = rng.NextUniform();
    } else {
      u -= px;
      px = (static_cast<double>(n - x + 1) * p * px) /
           (static_cast<double>(x) * q);
    }
  }
  return x;
}

// Hoermann's BTRS for n p >= 10 and p <= 1/2.
std::uint64_t BinomialBtrs(std::uint64_t n, double p, RandomStream& rng) {
  const double nd = static_cast<double>(n);
  const double q = 1.0 - p;
  const double spq = std::sqrt(nd * p * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = nd * p + 0.5;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double vr = 0.92 - 4.2 / b;
  const double m = std::floor((nd + 1.0) * p);
  const double lpq = std::log(p / q);
  const double h_m = std::lgamma(m + 1.0) + std::lgamma(nd - m + 1.0);
  for (;;) {
    const double u = rng.NextUniform() - 0.5;
    double v = rng.NextUniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + c);
    if (k < 0.0 || k > nd) continue;
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    v = std::log(v * alpha / (a / (us * us) + b));
    if (v <= h_m - std::lgamma(k + 1.0) - std::lgamma(nd - k + 1.0) +
                 (k - m) * lpq) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

void ClearRows(BinaryDataset& out, std::size_t column, std::size_t begin,
               std::size_t count, bool value) {
  auto words = out.mutable_column(column);
  const std::size_t end = begin + count;
  for (std::size_t w = begin >> 6; w < ((end + 63) >> 6); ++w) {
    const std::size_t base = w << 6;
    std::uint64_t mask = ~std::uint64_t{0};
    if (base < begin) mask &= ~std::uint64_t{0} << (begin - base);
    if (base + 64 > end) mask &= (std::uint64_t{1} << (end - base)) - 1;
    words[w] = value ? (words[w] | mask) : (words[w] & ~mask);
  }
}

}  // namespace

Element DrawKary(const KAryDistribution& p, RandomStream& rng) {
  const double u = rng.NextUniform();
  double cumulative = 0.0;
  const auto probs = p.probs();
  for (std::size_t j = 0; j + 1 < probs.size(); ++j) {
    cumulative += probs[j];
    if (u < cumulative) return static_cast<Element>(j + 1);
  }
  // Rounding can leave u above the final partial sum; the last element with
  // positive mass absorbs it.
  for (std::size_t j = probs.size(); j-- > 0;) {
    if (probs[j] > 0.0) return static_cast<Element>(j + 1);
  }
  return static_cast<Element>(probs.size());
}

std::vector<std::uint8_t> DrawProduct(const ProductBernoulli& p,
                                      RandomStream& rng) {
  std::vector<std::uint8_t> out(p.d());
  for (std::size_t j = 0; j < p.d(); ++j) {
    out[j] = rng.NextBernoulli(p.bias(j)) ? 1 : 0;
  }
  return out;
}

std::uint64_t DrawPoisson(double lambda, RandomStream& rng) {
  if (!(lambda >= 0.0) || std::isinf(lambda)) {
    throw ParameterError("DrawPoisson: lambda must be finite and >= 0");
  }
  if (lambda == 0.0) return 0;
  return lambda < kPoissonInversionCutoff ? PoissonInversion(lambda, rng)
                                          : PoissonPtrs(lambda, rng);
}

std::uint64_t DrawBinomial(std::uint64_t trials, double p, RandomStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("DrawBinomial: p must lie in [0, 1]");
  }
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  if (p > 0.5) return trials - DrawBinomial(trials, 1.0 - p, rng);
  if (static_cast<double>(trials) * p < 10.0) {
    return BinomialInversion(trials, p, rng);
  }
  return BinomialBtrs(trials, p, rng);
}

std::vector<std::uint64_t> DrawMultinomial(std::uint64_t trials,
                                           std::span<const double> cell_probs,
                                           RandomStream& rng) {
  double total = 0.0;
  for (double p : cell_probs) {
    if (!(p >= 0.0)) {
      throw ParameterError("DrawMultinomial: negative cell probability");
    }
    total += p;
  }
  if (total > 1.0 + kRenormalizeTolerance) {
    throw ParameterError("DrawMultinomial: cell probabilities sum to " +
                         std::to_string(total) + " > 1");
  }
  std::vector<std::uint64_t> counts(cell_probs.size(), 0);
  std::uint64_t remaining = trials;
  // Mass of the cells not yet visited, including the discard cell.
  double mass_left = 1.0;
  for (std::size_t i = 0; i < cell_probs.size() && remaining > 0; ++i) {
    const double conditional =
        mass_left > 0.0 ? std::clamp(cell_probs[i] / mass_left, 0.0, 1.0) : 1.0;
    counts[i] = DrawBinomial(remaining, conditional, rng);
    remaining -= counts[i];
    mass_left -= cell_probs[i];
  }
  return counts;
}

std::vector<std::uint64_t> DrawEqualCellMultinomial(std::uint64_t trials,
                                                    std::uint64_t cells,
                                                    double cell_prob,
                                                    RandomStream& rng) {
  if (!(cell_prob >= 0.0) ||
      static_cast<double>(cells) * cell_prob > 1.0 + kRenormalizeTolerance) {
    throw ParameterError("DrawEqualCellMultinomial: invalid cell mass");
  }
  std::vector<std::uint64_t> hits;
  if (cells == 0 || cell_prob == 0.0) return hits;
  hits.reserve(trials);
  const double kept = static_cast<double>(cells) * cell_prob;
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (kept < 1.0 && !rng.NextBernoulli(kept)) continue;
    hits.push_back(rng.NextBelow(cells));
  }
  return hits;
}

AliasTable::AliasTable(const KAryDistribution& p)
    : threshold_(p.k(), 1.0), alias_(p.k(), 0) {
  const std::size_t k = p.k();
  std::vector<double> scaled(k);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  for (std::size_t j = 0; j < k; ++j) {
    scaled[j] = p.probs()[j] * static_cast<double>(k);
    alias_[j] = static_cast<std::uint32_t>(j);
    (scaled[j] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(j));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    threshold_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::uint32_t j : small) threshold_[j] = 1.0;
  for (std::uint32_t j : large) threshold_[j] = 1.0;
}

Element AliasTable::Draw(RandomStream& rng) const {
  const std::uint64_t column = rng.NextBelow(threshold_.size());
  const double u = rng.NextUniform();
  const std::uint64_t j = u < threshold_[column] ? column : alias_[column];
  return static_cast<Element>(j + 1);
}

KAryDataset DrawKaryDataset(const KAryDistribution& p, std::size_t n,
                            RandomStream& rng) {
  const AliasTable table(p);
  std::vector<Element> records(n);
  for (auto& r : records) r = table.Draw(rng);
  return KAryDataset(std::move(records), p.k());
}

void FillBernoulliColumn(BinaryDataset& out, std::size_t column,
                         std::size_t begin, std::size_t count, double p,
                         RandomStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("FillBernoulliColumn: p must lie in [0, 1]");
  }
  if (begin + count > out.rows() || column >= out.cols()) {
    throw DimensionError("FillBernoulliColumn: range outside dataset");
  }
  if (count == 0) return;
  if (p == 0.5) {
    // Fair bits straight from the generator.
    auto words = out.mutable_column(column);
    const std::size_t end = begin + count;
    for (std::size_t w = begin >> 6; w < ((end + 63) >> 6); ++w) {
      const std::size_t base = w << 6;
      std::uint64_t mask = ~std::uint64_t{0};
      if (base < begin) mask &= ~std::uint64_t{0} << (begin - base);
      if (base + 64 > end) mask &= (std::uint64_t{1} << (end - base)) - 1;
      words[w] = (words[w] & ~mask) | (rng.NextU64() & mask);
    }
    return;
  }
  const std::uint64_t ones = DrawBinomial(count, p, rng);
  // Place the minority symbol at distinct uniform positions by rejection.
  const bool place_ones = ones <= count / 2;
  const std::uint64_t placed = place_ones ? ones : count - ones;
  ClearRows(out, column, begin, count, !place_ones);
  for (std::uint64_t done = 0; done < placed;) {
    const std::size_t row = begin + rng.NextBelow(count);
    if (out.Get(row, column) != place_ones) {
      out.Set(row, column, place_ones);
      ++done;
    }
  }
}

BinaryDataset DrawBinaryDataset(const ProductBernoulli& p, std::size_t n,
                                RandomStream& rng) {
  BinaryDataset out(n, p.d());
  for (std::size_t j = 0; j < p.d(); ++j) {
    FillBernoulliColumn(out, j, 0, n, p.bias(j), rng);
  }
  return out;
}

}  // namespace dpsample
