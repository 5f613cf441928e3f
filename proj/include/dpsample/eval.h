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
// Verification harness: exact oracles for the clipped sampler, Monte Carlo
// total-variation estimates, empirical privacy audits, and parameter
// sweeps.
//
// Trial t of a run draws all of its randomness from RandomStream(seed,
// offset + t), so results do not depend on the thread count.

#ifndef DPSAMPLE_EVAL_H_
#define DPSAMPLE_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpsample/datasets.h"
#include "dpsample/distributions.h"
#include "dpsample/transforms.h"

namespace dpsample {

enum class InputSize { kFixed, kPoisson };

struct TrialOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  // Added to the trial index to form the stream id.
  std::uint64_t stream_offset = 0;
  // 0 means hardware concurrency.
  std::size_t threads = 0;
  // kPoisson draws the dataset size from Po(n) on every trial.
  InputSize input_size = InputSize::kFixed;
};

struct TvEstimate {
  double tv = 0.0;
  double slack = 0.0;
};

// Output histogram of `sampler` over `trials` fresh datasets from `p`.
std::vector<std::uint64_t> CollectKaryOutputs(const SamplerHandle& sampler,
                                              const KAryDistribution& p,
                                              std::size_t n,
                                              const TrialOptions& options);

// TV between the empirical output pmf and p; slack sqrt(k / trials).
TvEstimate EstimateTvKary(const SamplerHandle& sampler,
                          const KAryDistribution& p, std::size_t n,
                          const TrialOptions& options);

// Per-coordinate output frequencies over `trials` fresh datasets.
std::vector<double> CollectProductFrequencies(
    const ProductSamplerHandle& sampler, const ProductBernoulli& p,
    std::size_t n, const TrialOptions& options);

// Sum of per-coordinate |frequency - p_j|, an upper-bound estimate of the
// product TV; slack 3 d sqrt(1 / (4 trials)).
TvEstimate EstimateTvProduct(const ProductSamplerHandle& sampler,
                             const ProductBernoulli& p, std::size_t n,
                             const TrialOptions& options);

// E[clip(Bin(n, p) / n, 1/4, 3/4)], summed in the log domain.
double ExactClipExpectation(double p, std::size_t n);

// Largest output-probability ratio of the clipped sampler over adjacent
// one-counts and both output symbols.
double PrivacyAuditClip(std::size_t n);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

Interval WilsonInterval(std::uint64_t successes, std::uint64_t trials,
                        double z);

// z-score used by the Monte Carlo audit.
inline constexpr double kAuditZ = 3.0;

struct AuditRow {
  Element element = 0;
  std::uint64_t count_x = 0;
  std::uint64_t count_x_prime = 0;
  Interval ci_x;
  Interval ci_x_prime;
  // max(lo_x / hi_x', lo_x' / hi_x): the ratio the intervals certify.
  double adjusted_ratio = 0.0;
  bool flagged = false;
};

struct AuditReport {
  double epsilon = 0.0;
  std::vector<AuditRow> rows;
  double max_adjusted_ratio = 0.0;
  bool flagged = false;
};

// Runs the sampler `trials` times on each of x and x_prime (same size, at
// most one differing record) and flags every output symbol whose
// interval-adjusted ratio exceeds e^epsilon.
AuditReport PrivacyAuditMc(const SamplerHandle& sampler, const KAryDataset& x,
                           const KAryDataset& x_prime, double epsilon,
                           const TrialOptions& options);

enum class SamplerClass { kKary, kProduct, kBoundedProduct, kStar };

std::string ClassName(SamplerClass c);
// Throws ParameterError on an unknown name.
SamplerClass ParseClassName(const std::string& name);

struct PrivacyPoint {
  bool zcdp = false;
  double epsilon = 0.0;
  double delta = 0.0;
  double rho = 0.0;
};

struct NRule {
  // Explicit sizes, or the class's size formula times `scale`.
  bool explicit_values = false;
  std::vector<std::size_t> values;
  double scale = 1.0;
};

struct SweepConfig {
  SamplerClass sampler_class = SamplerClass::kKary;
  std::vector<std::size_t> dims;
  std::vector<PrivacyPoint> privacy;
  std::vector<double> alphas;
  NRule n_rule;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double constant_scale = 1.0;
  bool audits = false;
  // Source distribution: "uniform", "skewed" or "random".
  std::string source = "uniform";
  // Star class only: "prod" or "perfect" inner product sampler.
  std::string star_inner = "prod";
  double reduction_c = 10.0;

  // Throws ConfigError naming the offending field.
  void Validate() const;
};

struct EvalRow {
  SamplerClass sampler_class = SamplerClass::kKary;
  std::size_t dim = 0;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> rho;
  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double tv_estimate = 0.0;
  double tv_slack = 0.0;
  std::optional<double> audit_max_ratio;
  std::uint64_t seed = 0;
  std::optional<double> wall_time_s;

  bool operator==(const EvalRow&) const = default;
};

struct SweepOptions {
  std::size_t threads = 0;
  bool timing = false;
};

// One row per grid point, in order dims x privacy x alphas x n.
std::vector<EvalRow> Sweep(const SweepConfig& config,
                           const SweepOptions& options);

// Whether a row meets its class's accuracy bound (and audit bound, when
// present). Star rows are held to alpha + (60 alpha)^2 + slack.
bool RowWithinContract(const EvalRow& row);

}  // namespace dpsample

#endif  // DPSAMPLE_EVAL_H_
