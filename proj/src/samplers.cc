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
#include <numeric>
#include <string>

#include "dpsample/errors.h"
#include "dpsample/mechanisms.h"
#include "dpsample/variates.h"

namespace dpsample {
namespace {

std::size_t CeilToSize(double x) {
  return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

// Standard deviation of the Gaussian mechanism for L2 sensitivity
// `sensitivity` at rho-zCDP.
double GaussianSigma(double sensitivity, double rho) {
  return sensitivity / std::sqrt(2.0 * rho);
}

std::vector<std::size_t> AllColumns(std::size_t d) {
  std::vector<std::size_t> columns(d);
  std::iota(columns.begin(), columns.end(), std::size_t{0});
  return columns;
}

// Noisy truncated mean of `columns` over `slice`, written into
// estimates[columns[i]].
void NoisyTruncatedMean(const BinaryView& slice,
                        std::span<const std::size_t> columns, double ceiling,
                        double rho, std::span<const std::uint8_t> flips,
                        RandomStream& rng, std::vector<double>& estimates) {
  const std::vector<double> means =
      TruncatedMean(slice, columns, TruncationCeiling(ceiling), flips);
  const double sigma =
      GaussianSigma(ceiling / static_cast<double>(slice.rows()), rho);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    estimates[columns[i]] = means[i] + GaussianNoise(sigma, rng);
  }
}

BucketingState RunBucketing(const BinaryView& half, std::size_t m,
                            const ProdSamplerConfig& cfg, RandomStream& rng) {
  const std::size_t d = half.cols();
  const std::size_t rounds = ProdRounds(d);
  BucketingState state;
  state.rounds = rounds;
  state.records_per_round = m;
  state.bucket_of.assign(d, 0);
  state.buckets.assign(2 * rounds + 2, {});
  state.u.assign(2 * rounds + 2, 0.0);
  state.tau.assign(rounds + 2, 0.0);
  state.ceilings.assign(2 * rounds + 2, 0.0);
  state.flips.assign(d, 0);

  const double md = static_cast<double>(m);
  const std::vector<std::size_t> all = AllColumns(d);
  std::vector<double> estimates(d, 0.0);

  // Orientation round: untruncated means, L2 sensitivity sqrt(d) / m.
  {
    const BinaryView slice(half.data(), half.begin(), m);
    const double sigma =
        GaussianSigma(std::sqrt(static_cast<double>(d)) / md, cfg.rho);
    for (std::size_t j = 0; j < d; ++j) {
      const double mean = static_cast<double>(slice.ColumnCount(j)) / md;
      if (mean + GaussianNoise(sigma, rng) > 0.5) state.flips[j] = 1;
    }
  }

  std::vector<std::size_t> passing = all;
  double u = 0.5;
  double tau = 3.0 / 16.0;
  const double log_term =
      std::log(md * static_cast<double>(rounds) / cfg.beta);
  for (std::size_t r = 1; r <= rounds; ++r) {
    state.u[r] = u;
    state.u[rounds + r] = u;
    state.tau[r] = tau;
    std::vector<std::size_t> next;
    std::vector<std::size_t>& bucket = state.buckets[rounds + r];
    if (!passing.empty()) {
      const double ceiling = std::sqrt(
          6.0 * u * static_cast<double>(passing.size()) * log_term);
      state.ceilings[r] = ceiling;
      state.ceilings[rounds + r] = ceiling;
      const BinaryView slice(half.data(), half.begin() + r * m, m);
      NoisyTruncatedMean(slice, passing, ceiling, cfg.rho, state.flips, rng,
                         estimates);
      for (std::size_t j : passing) {
        (estimates[j] < tau ? next : bucket).push_back(j);
      }
    }
    passing = std::move(next);
    tau /= 2.0;
    u /= 2.0;
  }
  state.tau[rounds + 1] = tau;
  state.u[2 * rounds + 1] = 20.0 / static_cast<double>(d);
  state.ceilings[2 * rounds + 1] = std::sqrt(200.0 * std::log(md / cfg.beta));
  state.buckets[2 * rounds + 1] = std::move(passing);
  for (std::size_t r = rounds + 1; r <= 2 * rounds + 1; ++r) {
    for (std::size_t j : state.buckets[r]) state.bucket_of[j] = r;
  }
  return state;
}

void CheckRows(std::size_t have, std::size_t need, const char* what) {
  if (have < need) {
    throw ParameterError(std::string(what) + ": need at least " +
                         std::to_string(need) + " rows, got " +
                         std::to_string(have));
  }
}

}  // namespace

KAryDistribution KaryNoisyEstimate(const KAryDataset& x, double epsilon,
                                   RandomStream& rng) {
  if (x.empty()) throw ParameterError("KarySample: empty dataset");
  if (!(epsilon > 0.0)) throw ParameterError("KarySample: epsilon must be positive");
  const double n = static_cast<double>(x.size());
  const double scale = 2.0 / (epsilon * n);
  const std::vector<std::uint64_t> counts = x.Histogram();
  std::vector<double> noisy(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    noisy[j] = static_cast<double>(counts[j]) / n + LaplaceNoise(scale, rng);
  }
  return ProjectL1Simplex(noisy);
}

Element KarySample(const KAryDataset& x, double epsilon, RandomStream& rng) {
  return DrawKary(KaryNoisyEstimate(x, epsilon, rng), rng);
}

std::size_t KaryRequiredSize(std::size_t k, double alpha, double epsilon) {
  if (!(alpha > 0.0) || !(epsilon > 0.0)) {
    throw ParameterError("KaryRequiredSize: alpha and epsilon must be positive");
  }
  return CeilToSize(2.0 * static_cast<double>(k) / (alpha * epsilon));
}

double ClipBiasFromCount(std::uint64_t ones, std::uint64_t n) {
  if (n == 0) throw ParameterError("ClipBias: empty input");
  if (ones > n) throw ParameterError("ClipBias: count exceeds size");
  return ClipInterval(static_cast<double>(ones) / static_cast<double>(n), 0.25,
                      0.75);
}

double ClipBias(std::span<const std::uint8_t> bits) {
  std::uint64_t ones = 0;
  for (std::uint8_t b : bits) {
    if (b > 1) throw ParameterError("ClipBias: entries must be 0 or 1");
    ones += b;
  }
  return ClipBiasFromCount(ones, bits.size());
}

bool ClipBernoulliSample(std::span<const std::uint8_t> bits, RandomStream& rng) {
  return rng.NextBernoulli(ClipBias(bits));
}

std::size_t ClipBernoulliRequiredSize(double alpha, double epsilon) {
  if (!(alpha > 0.0) || !(epsilon > 0.0)) {
    throw ParameterError("ClipBernoulliRequiredSize: parameters must be positive");
  }
  return std::max(CeilToSize(72.0 * std::log(6.0 / alpha)),
                  CeilToSize(4.0 / epsilon));
}

std::vector<std::uint8_t> ClipProductSample(const BinaryDataset& x,
                                            RandomStream& rng) {
  if (x.rows() == 0) throw ParameterError("ClipProductSample: empty dataset");
  const BinaryView all(x);
  std::vector<std::uint8_t> out(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    out[j] = rng.NextBernoulli(ClipBiasFromCount(all.ColumnCount(j), x.rows()));
  }
  return out;
}

double ClipProductZcdp(std::size_t d, std::size_t n) {
  if (n == 0) throw ParameterError("ClipProductZcdp: n must be positive");
  const double nd = static_cast<double>(n);
  return 8.0 * static_cast<double>(d) / (nd * nd);
}

std::size_t ClipProductRequiredSize(std::size_t d, double alpha, double rho) {
  if (!(alpha > 0.0) || !(rho > 0.0) || d == 0) {
    throw ParameterError("ClipProductRequiredSize: invalid parameters");
  }
  const double dd = static_cast<double>(d);
  return std::max(CeilToSize(72.0 * std::log(6.0 * dd / alpha)),
                  CeilToSize(std::sqrt(8.0 * dd / rho)));
}

ProdSamplerConfig ProdSamplerConfig::ForAccuracy(double alpha, double rho,
                                                 std::size_t d,
                                                 double constant_scale) {
  ProdSamplerConfig cfg;
  cfg.alpha = alpha;
  cfg.rho = rho;
  cfg.beta = alpha / (12.0 * static_cast<double>(d));
  cfg.constant_scale = constant_scale;
  return cfg;
}

void ProdSamplerConfig::Validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ParameterError("ProdSamplerConfig: alpha must lie in (0, 1]");
  }
  if (!(rho > 0.0)) throw ParameterError("ProdSamplerConfig: rho must be positive");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ParameterError("ProdSamplerConfig: beta must lie in (0, 1)");
  }
  if (!(constant_scale > 0.0)) {
    throw ParameterError("ProdSamplerConfig: constant_scale must be positive");
  }
}

std::size_t ProdRounds(std::size_t d) {
  if (d == 0) throw ParameterError("ProdRounds: d must be positive");
  const double r = std::ceil(std::log2(static_cast<double>(d) / 40.0) - 1e-12);
  return r < 1.0 ? 1 : static_cast<std::size_t>(r);
}

double ProdRecordsPerRound(std::size_t d, const ProdSamplerConfig& cfg) {
  cfg.Validate();
  const double dd = static_cast<double>(d);
  const double sqrt_2rho = std::sqrt(2.0 * cfg.rho);
  const double rounds = static_cast<double>(ProdRounds(d));
  const double log_term =
      std::log(dd * rounds / (cfg.alpha * cfg.beta * sqrt_2rho));
  return cfg.constant_scale * 1200.0 * dd / (cfg.alpha * sqrt_2rho) *
         std::pow(std::max(log_term, 0.0), 1.25);
}

bool ProdUsesRecursion(std::size_t d, const ProdSamplerConfig& cfg) {
  return d >= cfg.d_min_recursive;
}

std::size_t ProdRequiredRows(std::size_t d, const ProdSamplerConfig& cfg) {
  const std::size_t m =
      std::max<std::size_t>(1, CeilToSize(ProdRecordsPerRound(d, cfg)));
  return ProdUsesRecursion(d, cfg) ? (2 * ProdRounds(d) + 2) * m : m;
}

BucketingState ProdBucketingPhase(const BinaryView& half,
                                  const ProdSamplerConfig& cfg,
                                  RandomStream& rng) {
  cfg.Validate();
  const std::size_t d = half.cols();
  if (d == 0) throw ParameterError("ProdBucketingPhase: d must be positive");
  if (!ProdUsesRecursion(d, cfg)) {
    throw ParameterError("ProdBucketingPhase: d below d_min_recursive");
  }
  const std::size_t rounds = ProdRounds(d);
  const std::size_t need =
      std::max<std::size_t>(1, CeilToSize(ProdRecordsPerRound(d, cfg)));
  CheckRows(half.rows(), (rounds + 1) * need, "ProdBucketingPhase");
  return RunBucketing(half, half.rows() / (rounds + 1), cfg, rng);
}

ProdSampleTrace ProdSampleTraced(const BinaryDataset& x,
                                 const ProdSamplerConfig& cfg,
                                 RandomStream& rng) {
  cfg.Validate();
  const std::size_t d = x.cols();
  if (d == 0) throw ParameterError("ProdSample: d must be positive");
  CheckRows(x.rows(), ProdRequiredRows(d, cfg), "ProdSample");

  ProdSampleTrace trace;
  trace.estimates.assign(d, 0.0);
  trace.output.assign(d, 0);
  std::vector<std::uint8_t> flips(d, 0);

  if (!ProdUsesRecursion(d, cfg)) {
    // Single round: every record, ceiling for biases up to 1/2.
    const BinaryView all(x);
    const double md = static_cast<double>(x.rows());
    const double ceiling = std::sqrt(6.0 * 0.5 * static_cast<double>(d) *
                                     std::log(md / cfg.beta));
    NoisyTruncatedMean(all, AllColumns(d), ceiling, cfg.rho, {}, rng,
                       trace.estimates);
  } else {
    trace.recursive = true;
    const std::size_t rounds = ProdRounds(d);
    const std::size_t m = x.rows() / (2 * rounds + 2);
    trace.state = RunBucketing(BinaryView(x, 0, (rounds + 1) * m), m, cfg, rng);
    flips = trace.state.flips;
    // Sampling round r reads slice r: slice 0 oriented, 1..R bucketed.
    for (std::size_t r = rounds + 1; r <= 2 * rounds + 1; ++r) {
      const auto& bucket = trace.state.buckets[r];
      if (bucket.empty()) continue;
      NoisyTruncatedMean(BinaryView(x, r * m, m), bucket,
                         trace.state.ceilings[r], cfg.rho, flips, rng,
                         trace.estimates);
    }
  }

  // Per-coordinate draws come from indexed child streams.
  const std::uint64_t family = rng.NextU64();
  for (std::size_t j = 0; j < d; ++j) {
    const double q = ClipInterval(trace.estimates[j], 0.0, 1.0);
    RandomStream coordinate = rng.Child(family, j);
    const bool bit = coordinate.NextBernoulli(q);
    trace.output[j] = static_cast<std::uint8_t>(bit != (flips[j] != 0));
  }
  return trace;
}

std::vector<std::uint8_t> ProdSample(const BinaryDataset& x,
                                     const ProdSamplerConfig& cfg,
                                     RandomStream& rng) {
  return ProdSampleTraced(x, cfg, rng).output;
}

}  // namespace dpsample
