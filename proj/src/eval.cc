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

#include "dpsample/eval.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <utility>

#include "dpsample/errors.h"
#include "dpsample/mechanisms.h"
#include "dpsample/privacy.h"
#include "dpsample/reductions.h"
#include "dpsample/samplers.h"
#include "dpsample/variates.h"

namespace dpsample {
namespace {

std::size_t WorkerCount(std::size_t tasks, std::size_t threads) {
  std::size_t workers = threads;
  if (workers == 0) {
    workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  return std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, tasks));
}

// Calls fn(worker, begin, end) on `workers` contiguous blocks of [0, tasks).
template <typename Fn>
void RunBlocks(std::size_t tasks, std::size_t workers, Fn&& fn) {
  if (workers == 1) {
    fn(std::size_t{0}, std::size_t{0}, tasks);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        fn(w, tasks * w / workers, tasks * (w + 1) / workers);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void CheckTrials(std::size_t trials) {
  if (trials == 0) throw ParameterError("trials must be at least 1");
}

std::size_t InputSizeFor(const TrialOptions& options, std::size_t n,
                         RandomStream& rng) {
  if (options.input_size == InputSize::kFixed) return n;
  return static_cast<std::size_t>(DrawPoisson(static_cast<double>(n), rng));
}

double Clip(std::size_t t, std::size_t n) {
  return ClipInterval(static_cast<double>(t) / static_cast<double>(n), 0.25,
                      0.75);
}

}  // namespace

std::vector<std::uint64_t> CollectKaryOutputs(const SamplerHandle& sampler,
                                              const KAryDistribution& p,
                                              std::size_t n,
                                              const TrialOptions& options) {
  CheckTrials(options.trials);
  const std::size_t k = p.k();
  if (sampler.k != 0 && sampler.k != k) {
    throw DimensionError("sampler universe differs from the source");
  }
  const AliasTable table(p);
  const std::size_t workers = WorkerCount(options.trials, options.threads);
  std::vector<std::vector<std::uint64_t>> partial(
      workers, std::vector<std::uint64_t>(k, 0));
  RunBlocks(options.trials, workers,
            [&](std::size_t w, std::size_t begin, std::size_t end) {
              for (std::size_t t = begin; t < end; ++t) {
                RandomStream rng(options.seed, options.stream_offset + t);
                std::vector<Element> records(InputSizeFor(options, n, rng));
                for (Element& e : records) e = table.Draw(rng);
                const Element out =
                    sampler(KAryDataset(std::move(records), k), rng);
                if (out < 1 || out > k) {
                  throw InternalError("sampler output outside the universe");
                }
                ++partial[w][out - 1];
              }
            });
  std::vector<std::uint64_t> histogram(k, 0);
  for (const auto& h : partial) {
    for (std::size_t j = 0; j < k; ++j) histogram[j] += h[j];
  }
  return histogram;
}

TvEstimate EstimateTvKary(const SamplerHandle& sampler,
                          const KAryDistribution& p, std::size_t n,
                          const TrialOptions& options) {
  const std::vector<std::uint64_t> histogram =
      CollectKaryOutputs(sampler, p, n, options);
  const double trials = static_cast<double>(options.trials);
  std::vector<double> empirical(histogram.size());
  for (std::size_t j = 0; j < histogram.size(); ++j) {
    empirical[j] = static_cast<double>(histogram[j]) / trials;
  }
  return {TvDistance(empirical, p.probs()),
          std::sqrt(static_cast<double>(p.k()) / trials)};
}

std::vector<double> CollectProductFrequencies(
    const ProductSamplerHandle& sampler, const ProductBernoulli& p,
    std::size_t n, const TrialOptions& options) {
  CheckTrials(options.trials);
  const std::size_t d = p.d();
  if (sampler.d != 0 && sampler.d != d) {
    throw DimensionError("sampler dimension differs from the source");
  }
  const std::size_t workers = WorkerCount(options.trials, options.threads);
  std::vector<std::vector<std::uint64_t>> partial(
      workers, std::vector<std::uint64_t>(d, 0));
  RunBlocks(options.trials, workers,
            [&](std::size_t w, std::size_t begin, std::size_t end) {
              for (std::size_t t = begin; t < end; ++t) {
                RandomStream rng(options.seed, options.stream_offset + t);
                const BinaryDataset x =
                    DrawBinaryDataset(p, InputSizeFor(options, n, rng), rng);
                const std::vector<std::uint8_t> out = sampler(x, rng);
                if (out.size() != d) {
                  throw InternalError("sampler output has the wrong length");
                }
                for (std::size_t j = 0; j < d; ++j) partial[w][j] += out[j];
              }
            });
  std::vector<double> frequencies(d, 0.0);
  for (const auto& ones : partial) {
    for (std::size_t j = 0; j < d; ++j) {
      frequencies[j] += static_cast<double>(ones[j]);
    }
  }
  for (double& f : frequencies) f /= static_cast<double>(options.trials);
  return frequencies;
}

TvEstimate EstimateTvProduct(const ProductSamplerHandle& sampler,
                             const ProductBernoulli& p, std::size_t n,
                             const TrialOptions& options) {
  const std::vector<double> frequencies =
      CollectProductFrequencies(sampler, p, n, options);
  double sum = 0.0;
  for (std::size_t j = 0; j < p.d(); ++j) {
    sum += std::abs(frequencies[j] - p.bias(j));
  }
  return {sum, 3.0 * static_cast<double>(p.d()) *
                   std::sqrt(1.0 / (4.0 * static_cast<double>(options.trials)))};
}

double ExactClipExpectation(double p, std::size_t n) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("ExactClipExpectation: p must lie in [0, 1]");
  }
  if (n == 0) throw ParameterError("ExactClipExpectation: n must be positive");
  if (p == 0.0) return Clip(0, n);
  if (p == 1.0) return Clip(n, n);
  const double nd = static_cast<double>(n);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(nd + 1.0);
  double total = 0.0;
  for (std::size_t t = 0; t <= n; ++t) {
    const double td = static_cast<double>(t);
    const double log_term = log_n_fact - std::lgamma(td + 1.0) -
                            std::lgamma(nd - td + 1.0) + td * log_p +
                            (nd - td) * log_q;
    total += std::exp(log_term) * Clip(t, n);
  }
  return total;
}

double PrivacyAuditClip(std::size_t n) {
  if (n == 0) throw ParameterError("PrivacyAuditClip: n must be positive");
  double worst = 1.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double a = Clip(t, n);
    const double b = Clip(t + 1, n);
    worst = std::max({worst, b / a, a / b, (1.0 - a) / (1.0 - b),
                      (1.0 - b) / (1.0 - a)});
  }
  return worst;
}

Interval WilsonInterval(std::uint64_t successes, std::uint64_t trials,
                        double z) {
  if (trials == 0) throw ParameterError("WilsonInterval: trials must be positive");
  if (successes > trials) {
    throw ParameterError("WilsonInterval: successes exceed trials");
  }
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

AuditReport PrivacyAuditMc(const SamplerHandle& sampler, const KAryDataset& x,
                           const KAryDataset& x_prime, double epsilon,
                           const TrialOptions& options) {
  CheckTrials(options.trials);
  if (!(epsilon > 0.0)) throw ParameterError("audit epsilon must be positive");
  if (x.size() != x_prime.size() || x.k() != x_prime.k()) {
    throw ParameterError("audit inputs are not neighbors: sizes differ");
  }
  std::size_t differing = 0;
  for (std::size_t i = 0; i < x.size(); ++i) differing += x[i] != x_prime[i];
  if (differing > 1) {
    throw ParameterError("audit inputs are not neighbors: " +
                         std::to_string(differing) + " records differ");
  }
  const std::size_t k = x.k();
  const std::size_t trials = options.trials;
  auto run = [&](const KAryDataset& data, std::uint64_t offset) {
    const std::size_t workers = WorkerCount(trials, options.threads);
    std::vector<std::vector<std::uint64_t>> partial(
        workers, std::vector<std::uint64_t>(k, 0));
    RunBlocks(trials, workers,
              [&](std::size_t w, std::size_t begin, std::size_t end) {
                for (std::size_t t = begin; t < end; ++t) {
                  RandomStream rng(options.seed, offset + t);
                  const Element out = sampler(data, rng);
                  if (out < 1 || out > k) {
                    throw InternalError("sampler output outside the universe");
                  }
                  ++partial[w][out - 1];
                }
              });
    std::vector<std::uint64_t> counts(k, 0);
    for (const auto& h : partial) {
      for (std::size_t j = 0; j < k; ++j) counts[j] += h[j];
    }
    return counts;
  };
  const std::vector<std::uint64_t> counts_x = run(x, options.stream_offset);
  const std::vector<std::uint64_t> counts_xp =
      run(x_prime, options.stream_offset + trials);

  AuditReport report;
  report.epsilon = epsilon;
  const double bound = std::exp(epsilon);
  for (std::size_t j = 0; j < k; ++j) {
    AuditRow row;
    row.element = static_cast<Element>(j + 1);
    row.count_x = counts_x[j];
    row.count_x_prime = counts_xp[j];
    row.ci_x = WilsonInterval(counts_x[j], trials, kAuditZ);
    row.ci_x_prime = WilsonInterval(counts_xp[j], trials, kAuditZ);
    row.adjusted_ratio = std::max(row.ci_x.lo / row.ci_x_prime.hi,
                                  row.ci_x_prime.lo / row.ci_x.hi);
    row.flagged = row.adjusted_ratio > bound;
    report.max_adjusted_ratio =
        std::max(report.max_adjusted_ratio, row.adjusted_ratio);
    report.flagged = report.flagged || row.flagged;
    report.rows.push_back(row);
  }
  return report;
}

std::string ClassName(SamplerClass c) {
  switch (c) {
    case SamplerClass::kKary:
      return "kary";
    case SamplerClass::kProduct:
      return "product";
    case SamplerClass::kBoundedProduct:
      return "bounded-product";
    case SamplerClass::kStar:
      return "star";
  }
  throw InternalError("unknown sampler class");
}

SamplerClass ParseClassName(const std::string& name) {
  for (SamplerClass c : {SamplerClass::kKary, SamplerClass::kProduct,
                         SamplerClass::kBoundedProduct, SamplerClass::kStar}) {
    if (ClassName(c) == name) return c;
  }
  throw ParameterError("unknown sampler class '" + name + "'");
}

void SweepConfig::Validate() const {
  const bool product_like = sampler_class == SamplerClass::kProduct ||
                            sampler_class == SamplerClass::kBoundedProduct;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::size_t min_dim = product_like ? 1 : 2;
    if (dims[i] < min_dim) {
      throw ConfigError("dims[" + std::to_string(i) + "]",
                        "dimension must be at least " + std::to_string(min_dim));
    }
  }
  for (std::size_t i = 0; i < privacy.size(); ++i) {
    const PrivacyPoint& point = privacy[i];
    const std::string path = "privacy[" + std::to_string(i) + "]";
    if (product_like) {
      if (!point.zcdp) throw ConfigError(path, "this class takes a rho budget");
      if (!(point.rho > 0.0)) throw ConfigError(path + ".rho", "must be positive");
      continue;
    }
    if (point.zcdp) throw ConfigError(path, "this class takes an epsilon budget");
    if (!(point.epsilon > 0.0)) {
      throw ConfigError(path + ".epsilon", "must be positive");
    }
    if (!(point.delta >= 0.0 && point.delta < 1.0)) {
      throw ConfigError(path + ".delta", "must lie in [0, 1)");
    }
    if (sampler_class == SamplerClass::kStar && star_inner == "prod" &&
        !(point.delta > 0.0)) {
      throw ConfigError(path + ".delta",
                        "the star class with a private inner sampler needs delta > 0");
    }
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double a = alphas[i];
    const std::string path = "alphas[" + std::to_string(i) + "]";
    if (!(a > 0.0 && a < 1.0)) throw ConfigError(path, "must lie in (0, 1)");
    if (sampler_class == SamplerClass::kStar && !(60.0 * a < 1.0)) {
      throw ConfigError(path, "star class needs 60 * alpha < 1");
    }
  }
  if (n_rule.explicit_values) {
    for (std::size_t i = 0; i < n_rule.values.size(); ++i) {
      if (n_rule.values[i] == 0) {
        throw ConfigError("n_rule.values[" + std::to_string(i) + "]",
                          "must be positive");
      }
    }
  } else if (!(n_rule.scale > 0.0)) {
    throw ConfigError("n_rule.scale", "must be positive");
  }
  if (trials == 0) throw ConfigError("trials", "must be at least 1");
  if (!(constant_scale > 0.0)) {
    throw ConfigError("constant_scale", "must be positive");
  }
  if (source != "uniform" && source != "skewed" && source != "random") {
    throw ConfigError("source", "must be uniform, skewed or random");
  }
  if (star_inner != "prod" && star_inner != "perfect") {
    throw ConfigError("star_inner", "must be prod or perfect");
  }
  if (!(reduction_c > 0.0)) throw ConfigError("reduction_c", "must be positive");
}

namespace {

constexpr std::uint64_t kSourceStreamBit = std::uint64_t{1} << 63;

KAryDistribution KarySource(const std::string& source, std::size_t k,
                            RandomStream& rng) {
  if (source == "uniform") return KAryDistribution::Uniform(k);
  std::vector<double> probs(k);
  if (source == "skewed") {
    probs.assign(k, 0.1 / static_cast<double>(k - 1));
    probs[0] = 0.9;
    return KAryDistribution(std::move(probs));
  }
  double total = 0.0;
  for (double& q : probs) {
    q = -std::log(rng.NextOpenUniform());
    total += q;
  }
  for (double& q : probs) q /= total;
  return KAryDistribution(std::move(probs));
}

ProductBernoulli ProductSource(const std::string& source, std::size_t d,
                               double lo, double hi, RandomStream& rng) {
  std::vector<double> biases(d, 0.5);
  if (source == "skewed") {
    biases.assign(d, lo > 0.0 ? lo : 0.1);
  } else if (source == "random") {
    for (double& b : biases) b = lo + (hi - lo) * rng.NextUniform();
  }
  return ProductBernoulli(std::move(biases));
}

std::size_t ScaledSize(double base, double scale) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(base * scale - 1e-9)));
}

struct GridPoint {
  std::size_t dim;
  PrivacyPoint privacy;
  double alpha;
  std::optional<std::size_t> n;
};

EvalRow RunPoint(const SweepConfig& config, const GridPoint& point,
                 std::size_t row_index, std::uint64_t& offset,
                 const SweepOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  EvalRow row;
  row.sampler_class = config.sampler_class;
  row.dim = point.dim;
  row.alpha = point.alpha;
  row.trials = config.trials;
  row.seed = config.seed;
  if (point.privacy.zcdp) {
    row.rho = point.privacy.rho;
  } else {
    row.epsilon = point.privacy.epsilon;
    row.delta = point.privacy.delta;
  }

  TrialOptions trials;
  trials.trials = config.trials;
  trials.seed = config.seed;
  trials.stream_offset = offset;
  trials.threads = options.threads;
  offset += config.trials;
  RandomStream source_rng(config.seed, kSourceStreamBit | row_index);
  const double scale = config.n_rule.scale;
  const std::size_t dim = point.dim;

  switch (config.sampler_class) {
    case SamplerClass::kKary: {
      const double eps = point.privacy.epsilon;
      const KAryDistribution p = KarySource(config.source, dim, source_rng);
      const SamplerHandle sampler = KarySamplerHandle(dim, eps, point.alpha);
      row.n = point.n ? *point.n
                      : ScaledSize(static_cast<double>(
                                       KaryRequiredSize(dim, point.alpha, eps)),
                                   scale);
      const TvEstimate tv = EstimateTvKary(sampler, p, row.n, trials);
      row.tv_estimate = tv.tv;
      row.tv_slack = tv.slack;
      if (config.audits) {
        std::vector<Element> records(row.n);
        for (std::size_t i = 0; i < row.n; ++i) {
          records[i] = static_cast<Element>(i % dim + 1);
        }
        std::vector<Element> neighbor = records;
        neighbor[0] = static_cast<Element>(neighbor[0] % dim + 1);
        TrialOptions audit = trials;
        audit.stream_offset = offset;
        offset += 2 * config.trials;
        row.audit_max_ratio =
            PrivacyAuditMc(sampler, KAryDataset(std::move(records), dim),
                           KAryDataset(std::move(neighbor), dim), eps, audit)
                .max_adjusted_ratio;
      }
      break;
    }
    case SamplerClass::kBoundedProduct: {
      const ProductBernoulli p =
          ProductSource(config.source, dim, 1.0 / 3.0, 2.0 / 3.0, source_rng);
      row.n = point.n ? *point.n
                      : ScaledSize(static_cast<double>(ClipProductRequiredSize(
                                       dim, point.alpha, point.privacy.rho)),
                                   scale);
      ProductSamplerHandle sampler;
      sampler.run = [](const BinaryDataset& x, RandomStream& rng) {
        return ClipProductSample(x, rng);
      };
      sampler.d = dim;
      const TvEstimate tv = EstimateTvProduct(sampler, p, row.n, trials);
      row.tv_estimate = tv.tv;
      row.tv_slack = tv.slack;
      if (config.audits) row.audit_max_ratio = PrivacyAuditClip(row.n);
      break;
    }
    case SamplerClass::kProduct: {
      const ProductBernoulli p =
          ProductSource(config.source, dim, 0.0, 1.0, source_rng);
      const ProdSamplerConfig cfg = ProdSamplerConfig::ForAccuracy(
          point.alpha, point.privacy.rho, dim, config.constant_scale);
      row.n = point.n ? *point.n
                      : ScaledSize(static_cast<double>(ProdRequiredRows(dim, cfg)),
                                   scale);
      ProductSamplerHandle sampler;
      sampler.run = [cfg](const BinaryDataset& x, RandomStream& rng) {
        return ProdSample(x, cfg, rng);
      };
      sampler.d = dim;
      const TvEstimate tv = EstimateTvProduct(sampler, p, row.n, trials);
      row.tv_estimate = tv.tv;
      row.tv_slack = tv.slack;
      break;
    }
    case SamplerClass::kStar: {
      const StarDistribution star =
          StarDistribution::Canonical(dim, 60.0 * point.alpha);
      ReducedSamplerParams params;
      params.epsilon = point.privacy.epsilon;
      params.delta = point.privacy.delta;
      params.k = dim;
      params.alpha = point.alpha;
      params.c = config.reduction_c;
      const double picker_mean = ReducedPickerMean(params);
      ProductSamplerHandle inner;
      double base = 0.0;
      if (config.star_inner == "perfect") {
        inner = PerfectProductSamplerHandle(StarToProduct(star));
        base = 2.0 * picker_mean + 2.0;
      } else {
        const double rho = ZcdpForApproxDp(params.epsilon / 4.0, params.delta / 2.0);
        const ProdSamplerConfig cfg = ProdSamplerConfig::ForAccuracy(
            point.alpha / 25.0, rho, 2 * dim, config.constant_scale);
        inner.run = [cfg](const BinaryDataset& x, RandomStream& rng) {
          return ProdSample(x, cfg, rng);
        };
        inner.d = 2 * dim;
        base = picker_mean + 2.0 * static_cast<double>(ProdRequiredRows(2 * dim, cfg)) + 2.0;
      }
      row.n = point.n ? *point.n : ScaledSize(base, scale);
      params.n = static_cast<double>(row.n);
      SamplerHandle sampler;
      sampler.k = star.universe();
      sampler.run = [params, inner](const KAryDataset& x, RandomStream& rng) {
        return ReducedKarySample(x, params, inner, rng);
      };
      trials.input_size = InputSize::kPoisson;
      const TvEstimate tv = EstimateTvKary(sampler, star.ToKary(), row.n, trials);
      row.tv_estimate = tv.tv;
      row.tv_slack = tv.slack;
      break;
    }
  }
  if (options.timing) {
    row.wall_time_s = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  }
  return row;
}

}  // namespace

std::vector<EvalRow> Sweep(const SweepConfig& config,
                           const SweepOptions& options) {
  config.Validate();
  std::vector<GridPoint> grid;
  for (std::size_t dim : config.dims) {
    for (const PrivacyPoint& privacy : config.privacy) {
      for (double alpha : config.alphas) {
        if (config.n_rule.explicit_values) {
          for (std::size_t n : config.n_rule.values) {
            grid.push_back({dim, privacy, alpha, n});
          }
        } else {
          grid.push_back({dim, privacy, alpha, std::nullopt});
        }
      }
    }
  }
  std::vector<EvalRow> rows;
  rows.reserve(grid.size());
  std::uint64_t offset = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rows.push_back(RunPoint(config, grid[i], i, offset, options));
  }
  return rows;
}

bool RowWithinContract(const EvalRow& row) {
  double bound = row.alpha + row.tv_slack;
  if (row.sampler_class == SamplerClass::kStar) {
    bound += 3600.0 * row.alpha * row.alpha;
  }
  if (!(row.tv_estimate <= bound)) return false;
  if (!row.audit_max_ratio) return true;
  double audit_bound = 0.0;
  if (row.sampler_class == SamplerClass::kBoundedProduct) {
    audit_bound = std::exp(4.0 / static_cast<double>(row.n));
  } else if (row.epsilon) {
    audit_bound = std::exp(*row.epsilon);
  } else {
    return true;
  }
  return *row.audit_max_ratio <= audit_bound * (1.0 + 1e-12);
}

}  // namespace dpsample
