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

#include "dpsample/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpsample/errors.h"
#include "dpsample/eval.h"
#include "dpsample/privacy.h"
#include "dpsample/reductions.h"
#include "dpsample/samplers.h"
#include "dpsample/transforms.h"

namespace dpsample {
namespace {

using Json = nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return buffer.str();
}

void WriteOutput(const std::string& path, const std::string& content,
                 std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << content;
  if (!file) throw IoError("error writing '" + path + "'");
}

template <typename T>
bool ParseNumber(std::string_view text, T& value) {
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

// Splits off an optional "# key=value" header. Returns the value, if any.
std::optional<std::size_t> TakeHeader(std::string_view& text,
                                      std::string_view key) {
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos || text[first] != '#') return std::nullopt;
  const std::size_t eol = text.find('\n', first);
  std::string line(text.substr(first, eol == std::string_view::npos
                                          ? std::string_view::npos
                                          : eol - first));
  text = eol == std::string_view::npos ? std::string_view() : text.substr(eol + 1);
  std::string compact;
  for (char c : line.substr(1)) {
    if (c != ' ' && c != '\t' && c != '\r') compact += c;
  }
  const std::string prefix = std::string(key) + "=";
  std::size_t value = 0;
  if (compact.rfind(prefix, 0) != 0 ||
      !ParseNumber(std::string_view(compact).substr(prefix.size()), value) ||
      value == 0) {
    throw IoError("malformed header line '" + line + "'; expected '# " +
                  std::string(key) + "=<positive integer>'");
  }
  return value;
}

// ---------------------------------------------------------------------------
// JSON helpers.

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void CheckObject(const Json& value, const std::string& path,
                 std::initializer_list<std::string_view> allowed) {
  if (!value.is_object()) {
    throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  }
  for (const auto& [key, unused] : value.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) throw ConfigError(Join(path, key), "unknown key");
  }
}

const Json& Require(const Json& obj, const std::string& path,
                    const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(Join(path, key), "missing required key");
  return *it;
}

double AsReal(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

std::uint64_t AsUnsigned(const Json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ConfigError(path, "expected a nonnegative integer");
}

bool AsBool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string AsString(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

const Json& AsArray(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  return v;
}

PrivacyPoint ParsePrivacy(const Json& v, const std::string& path) {
  CheckObject(v, path, {"kind", "epsilon", "delta", "rho"});
  std::string kind;
  if (v.contains("kind")) {
    kind = AsString(v["kind"], Join(path, "kind"));
  } else {
    kind = v.contains("rho") ? "zcdp" : "approx";
  }
  PrivacyPoint point;
  if (kind == "zcdp") {
    if (v.contains("epsilon") || v.contains("delta")) {
      throw ConfigError(path, "a zcdp budget takes only rho");
    }
    point.zcdp = true;
    point.rho = AsReal(Require(v, path, "rho"), Join(path, "rho"));
  } else if (kind == "approx") {
    if (v.contains("rho")) throw ConfigError(Join(path, "rho"), "not valid for an approx budget");
    point.epsilon = AsReal(Require(v, path, "epsilon"), Join(path, "epsilon"));
    if (v.contains("delta")) point.delta = AsReal(v["delta"], Join(path, "delta"));
  } else {
    throw ConfigError(Join(path, "kind"), "must be approx or zcdp");
  }
  return point;
}

NRule ParseNRule(const Json& v, const std::string& path) {
  CheckObject(v, path, {"kind", "values", "scale"});
  const std::string kind = AsString(Require(v, path, "kind"), Join(path, "kind"));
  NRule rule;
  if (kind == "explicit") {
    if (v.contains("scale")) throw ConfigError(Join(path, "scale"), "not valid for explicit sizes");
    const std::string values_path = Join(path, "values");
    const Json& values = AsArray(Require(v, path, "values"), values_path);
    rule.explicit_values = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
      rule.values.push_back(AsUnsigned(values[i], Index(values_path, i)));
    }
  } else if (kind == "formula") {
    if (v.contains("values")) throw ConfigError(Join(path, "values"), "not valid for formula sizes");
    if (v.contains("scale")) rule.scale = AsReal(v["scale"], Join(path, "scale"));
  } else {
    throw ConfigError(Join(path, "kind"), "must be explicit or formula");
  }
  return rule;
}

// ---------------------------------------------------------------------------
// CSV.

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string Optional(const std::optional<double>& v) {
  return v ? FormatReal(*v) : std::string();
}

double CsvReal(const std::string& field, const char* name) {
  double v = 0.0;
  if (!ParseNumber(field, v)) {
    throw IoError(std::string("CSV: bad value for ") + name + ": '" + field + "'");
  }
  return v;
}

std::optional<double> CsvOptional(const std::string& field, const char* name) {
  if (field.empty()) return std::nullopt;
  return CsvReal(field, name);
}

template <typename T>
T CsvInteger(const std::string& field, const char* name) {
  T v = 0;
  if (!ParseNumber(field, v)) {
    throw IoError(std::string("CSV: bad value for ") + name + ": '" + field + "'");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Commands.

std::uint64_t DefaultSeed() {
  const char* env = std::getenv("DPS_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t seed = 0;
  if (!ParseNumber(std::string_view(env), seed)) {
    throw ParameterError(std::string("DPS_SEED is not an unsigned integer: '") +
                         env + "'");
  }
  return seed;
}

struct Flags {
  std::string sampler_class;
  std::string data;
  std::string neighbor;
  std::string config;
  std::string out;
  std::string source = "uniform";
  std::string inner = "prod";
  double epsilon = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  double alpha = 0.1;
  double constant_scale = 1.0;
  double c = 10.0;
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::size_t threads = 0;
  std::size_t dim = 0;
  std::size_t n = 0;
  std::size_t n_max = 1000;
  bool strict = false;
  bool timing = false;
  bool clip = false;
  bool audits = false;

  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* rho_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* dim_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* class_opt = nullptr;
};

bool Given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

void Need(const CLI::Option* opt, const std::string& name) {
  if (!Given(opt)) throw ParameterError("missing required option " + name);
}

std::string BitString(const std::vector<std::uint8_t>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (std::uint8_t b : bits) s += b ? '1' : '0';
  return s;
}

int CmdSample(const Flags& f, std::ostream& out, std::ostream& err) {
  const SamplerClass cls = ParseClassName(f.sampler_class);
  RandomStream rng(f.seed, 0);
  Json meta;
  meta["class"] = f.sampler_class;
  meta["seed"] = f.seed;
  std::string observation;
  switch (cls) {
    case SamplerClass::kKary: {
      Need(f.epsilon_opt, "--epsilon");
      const KAryDataset x = ReadKaryData(
          f.data, Given(f.dim_opt) ? std::optional<std::size_t>(f.dim) : std::nullopt);
      if (x.k() < 2) throw ParameterError("k-ary sampling needs k >= 2");
      observation = std::to_string(KarySample(x, f.epsilon, rng));
      meta["sampler"] = "kary-laplace";
      meta["k"] = x.k();
      meta["n"] = x.size();
      meta["epsilon"] = f.epsilon;
      break;
    }
    case SamplerClass::kBoundedProduct: {
      Need(f.rho_opt, "--rho");
      const BinaryDataset x = ReadBinaryData(f.data);
      if (!(f.rho > 0.0)) throw ParameterError("--rho must be positive");
      const double spent = ClipProductZcdp(x.cols(), x.rows());
      if (spent > f.rho) {
        throw ParameterError("dataset too small for rho = " + FormatReal(f.rho) +
                             ": needs n >= sqrt(8d/rho)");
      }
      observation = BitString(ClipProductSample(x, rng));
      meta["sampler"] = "clipped-bernoulli-product";
      meta["d"] = x.cols();
      meta["n"] = x.rows();
      meta["rho"] = f.rho;
      meta["rho_spent"] = spent;
      break;
    }
    case SamplerClass::kProduct: {
      Need(f.rho_opt, "--rho");
      const BinaryDataset x = ReadBinaryData(f.data);
      const ProdSamplerConfig cfg = ProdSamplerConfig::ForAccuracy(
          f.alpha, f.rho, x.cols(), f.constant_scale);
      observation = BitString(ProdSample(x, cfg, rng));
      meta["sampler"] = "recursive-preconditioning";
      meta["d"] = x.cols();
      meta["n"] = x.rows();
      meta["rho"] = f.rho;
      meta["alpha"] = f.alpha;
      meta["constant_scale"] = f.constant_scale;
      break;
    }
    case SamplerClass::kStar: {
      Need(f.epsilon_opt, "--epsilon");
      Need(f.delta_opt, "--delta");
      Need(f.dim_opt, "--dim");
      const std::size_t k = f.dim;
      const KAryDataset x = ReadKaryData(f.data, 2 * k + 1);
      ReducedSamplerParams params;
      params.epsilon = f.epsilon;
      params.delta = f.delta;
      params.k = k;
      params.alpha = f.alpha;
      params.c = f.c;
      params.n = Given(f.n_opt) ? static_cast<double>(f.n)
                                : static_cast<double>(x.size());
      ProductSamplerHandle inner;
      inner.d = 2 * k;
      const double rho = ZcdpForApproxDp(f.epsilon / 4.0, f.delta / 2.0);
      const ProdSamplerConfig cfg = ProdSamplerConfig::ForAccuracy(
          f.alpha / 25.0, rho, 2 * k, f.constant_scale);
      inner.run = [cfg](const BinaryDataset& y, RandomStream& r) {
        return ProdSample(y, cfg, r);
      };
      observation = std::to_string(ReducedKarySample(x, params, inner, rng));
      meta["sampler"] = "reduced-star";
      meta["k"] = k;
      meta["n"] = params.n;
      meta["epsilon"] = f.epsilon;
      meta["delta"] = f.delta;
      meta["alpha"] = f.alpha;
      break;
    }
  }
  WriteOutput(f.out, observation + "\n", out);
  err << meta.dump() << "\n";
  return 0;
}

SweepConfig ConfigFromFlags(const Flags& f, SamplerClass cls) {
  Need(f.dim_opt, "--dim");
  SweepConfig config;
  config.sampler_class = cls;
  config.dims = {f.dim};
  PrivacyPoint point;
  if (cls == SamplerClass::kProduct || cls == SamplerClass::kBoundedProduct) {
    Need(f.rho_opt, "--rho");
    point.zcdp = true;
    point.rho = f.rho;
  } else {
    Need(f.epsilon_opt, "--epsilon");
    point.epsilon = f.epsilon;
    point.delta = f.delta;
  }
  config.privacy = {point};
  config.alphas = {f.alpha};
  if (Given(f.n_opt)) {
    config.n_rule.explicit_values = true;
    config.n_rule.values = {f.n};
  }
  config.trials = f.trials;
  config.seed = f.seed;
  config.constant_scale = f.constant_scale;
  config.audits = f.audits;
  config.source = f.source;
  config.star_inner = f.inner;
  config.reduction_c = f.c;
  return config;
}

SweepConfig LoadConfig(const Flags& f) {
  SweepConfig config = ParseSweepConfig(ReadFile(f.config), f.seed);
  if (Given(f.seed_opt)) config.seed = f.seed;
  return config;
}

int RunReport(const SweepConfig& config, const Flags& f, std::ostream& out) {
  SweepOptions options;
  options.threads = f.threads;
  options.timing = f.timing;
  const std::vector<EvalRow> rows = Sweep(config, options);
  WriteOutput(f.out, FormatCsv(rows), out);
  if (f.strict) {
    for (const EvalRow& row : rows) {
      if (!RowWithinContract(row)) return 1;
    }
  }
  return 0;
}

int CmdEval(const Flags& f, std::ostream& out) {
  if (!f.config.empty()) return RunReport(LoadConfig(f), f, out);
  Need(f.class_opt, "--class");
  return RunReport(ConfigFromFlags(f, ParseClassName(f.sampler_class)), f, out);
}

int CmdSweep(const Flags& f, std::ostream& out) {
  if (f.config.empty()) throw ParameterError("sweep needs --config");
  return RunReport(LoadConfig(f), f, out);
}

int CmdReduce(const Flags& f, std::ostream& out) {
  SweepConfig config =
      f.config.empty() ? ConfigFromFlags(f, SamplerClass::kStar) : LoadConfig(f);
  if (config.sampler_class != SamplerClass::kStar) {
    throw ConfigError("class", "reduce runs the star class only");
  }
  if (f.config.empty() && !Given(f.delta_opt) && f.inner == "prod") {
    throw ParameterError("missing required option --delta");
  }
  return RunReport(config, f, out);
}

int CmdAudit(const Flags& f, std::ostream& out) {
  std::ostringstream csv;
  bool violated = false;
  if (f.clip) {
    if (f.n_max == 0) throw ParameterError("--n-max must be positive");
    csv << "n,max_ratio,bound\n";
    for (std::size_t n = 1; n <= f.n_max; ++n) {
      const double ratio = PrivacyAuditClip(n);
      const double bound = std::exp(4.0 / static_cast<double>(n));
      violated = violated || ratio > bound;
      csv << n << ',' << FormatReal(ratio) << ',' << FormatReal(bound) << '\n';
    }
  } else {
    Need(f.epsilon_opt, "--epsilon");
    if (f.data.empty() || f.neighbor.empty()) {
      throw ParameterError("audit needs --clip, or --data and --neighbor");
    }
    std::optional<std::size_t> k;
    if (Given(f.dim_opt)) k = f.dim;
    KAryDataset x = ReadKaryData(f.data, k);
    KAryDataset x_prime = ReadKaryData(f.neighbor, k);
    if (!k) {
      const std::size_t common = std::max(x.k(), x_prime.k());
      x = KAryDataset(std::vector<Element>(x.records().begin(), x.records().end()), common);
      x_prime = KAryDataset(
          std::vector<Element>(x_prime.records().begin(), x_prime.records().end()), common);
    }
    if (x.k() < 2) throw ParameterError("k-ary audit needs k >= 2");
    TrialOptions options;
    options.trials = f.trials;
    options.seed = f.seed;
    options.threads = f.threads;
    const AuditReport report = PrivacyAuditMc(
        KarySamplerHandle(x.k(), f.epsilon, f.alpha), x, x_prime, f.epsilon, options);
    violated = report.flagged;
    csv << "element,count_x,count_x_prime,lo_x,hi_x,lo_x_prime,hi_x_prime,"
           "adjusted_ratio,bound,flagged\n";
    const double bound = std::exp(f.epsilon);
    for (const AuditRow& row : report.rows) {
      csv << row.element << ',' << row.count_x << ',' << row.count_x_prime << ','
          << FormatReal(row.ci_x.lo) << ',' << FormatReal(row.ci_x.hi) << ','
          << FormatReal(row.ci_x_prime.lo) << ','
          << FormatReal(row.ci_x_prime.hi) << ','
          << FormatReal(row.adjusted_ratio) << ',' << FormatReal(bound) << ','
          << (row.flagged ? 1 : 0) << '\n';
    }
  }
  WriteOutput(f.out, csv.str(), out);
  return f.strict && violated ? 1 : 0;
}

}  // namespace

KAryDataset ParseKaryData(const std::string& text,
                          std::optional<std::size_t> k) {
  std::string_view body = text;
  const std::optional<std::size_t> header = TakeHeader(body, "k");
  std::vector<Element> records;
  Element largest = 0;
  std::size_t pos = 0;
  while (pos < body.size()) {
    pos = body.find_first_not_of(" \t\r\n", pos);
    if (pos == std::string_view::npos) break;
    std::size_t end = body.find_first_of(" \t\r\n", pos);
    if (end == std::string_view::npos) end = body.size();
    const std::string_view token = body.substr(pos, end - pos);
    Element e = 0;
    if (!ParseNumber(token, e) || e == 0) {
      throw IoError("k-ary data: '" + std::string(token) +
                    "' is not a positive integer");
    }
    largest = std::max(largest, e);
    records.push_back(e);
    pos = end;
  }
  const std::size_t universe = header ? *header : k ? *k : std::max<Element>(largest, 1);
  if (largest > universe) {
    throw IoError("k-ary data: record " + std::to_string(largest) +
                  " exceeds k = " + std::to_string(universe));
  }
  return KAryDataset(std::move(records), universe);
}

KAryDataset ReadKaryData(const std::string& path,
                         std::optional<std::size_t> k) {
  return ParseKaryData(ReadFile(path), k);
}

BinaryDataset ParseBinaryData(const std::string& text) {
  std::string_view body = text;
  const std::optional<std::size_t> header = TakeHeader(body, "d");
  std::vector<std::vector<std::uint8_t>> rows;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t eol = body.find('\n', start);
    if (eol == std::string_view::npos) eol = body.size();
    std::string_view line = body.substr(start, eol - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.remove_suffix(1);
    }
    if (!line.empty()) {
      std::vector<std::uint8_t> row;
      row.reserve(line.size());
      for (char c : line) {
        if (c != '0' && c != '1') {
          throw IoError("binary data: line " + std::to_string(rows.size() + 1) +
                        " contains '" + std::string(1, c) + "'");
        }
        row.push_back(static_cast<std::uint8_t>(c - '0'));
      }
      if (!rows.empty() && row.size() != rows.front().size()) {
        throw IoError("binary data: rows have different lengths");
      }
      if (header && row.size() != *header) {
        throw IoError("binary data: row length differs from the d header");
      }
      rows.push_back(std::move(row));
    }
    start = eol + 1;
  }
  if (rows.empty()) throw IoError("binary data: no rows");
  return BinaryDataset::FromRows(rows);
}

BinaryDataset ReadBinaryData(const std::string& path) {
  return ParseBinaryData(ReadFile(path));
}

SweepConfig ParseSweepConfig(const std::string& json_text,
                             std::uint64_t default_seed) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  CheckObject(root, "",
              {"class", "dims", "privacy", "alphas", "n_rule", "trials", "seed",
               "constant_scale", "audits", "source", "star_inner",
               "reduction_c"});
  SweepConfig config;
  try {
    config.sampler_class = ParseClassName(AsString(Require(root, "", "class"), "class"));
  } catch (const ConfigError&) {
    throw;
  } catch (const ParameterError& e) {
    throw ConfigError("class", e.what());
  }
  const Json& dims = AsArray(Require(root, "", "dims"), "dims");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    config.dims.push_back(AsUnsigned(dims[i], Index("dims", i)));
  }
  const Json& privacy = AsArray(Require(root, "", "privacy"), "privacy");
  for (std::size_t i = 0; i < privacy.size(); ++i) {
    config.privacy.push_back(ParsePrivacy(privacy[i], Index("privacy", i)));
  }
  const Json& alphas = AsArray(Require(root, "", "alphas"), "alphas");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    config.alphas.push_back(AsReal(alphas[i], Index("alphas", i)));
  }
  config.n_rule = ParseNRule(Require(root, "", "n_rule"), "n_rule");
  config.trials = AsUnsigned(Require(root, "", "trials"), "trials");
  config.seed = root.contains("seed") ? AsUnsigned(root["seed"], "seed") : default_seed;
  if (root.contains("constant_scale")) {
    config.constant_scale = AsReal(root["constant_scale"], "constant_scale");
  }
  if (root.contains("audits")) config.audits = AsBool(root["audits"], "audits");
  if (root.contains("source")) config.source = AsString(root["source"], "source");
  if (root.contains("star_inner")) {
    config.star_inner = AsString(root["star_inner"], "star_inner");
  }
  if (root.contains("reduction_c")) {
    config.reduction_c = AsReal(root["reduction_c"], "reduction_c");
  }
  config.Validate();
  return config;
}

std::string FormatReal(double x) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  if (ec != std::errc()) throw InternalError("FormatReal: conversion failed");
  return std::string(buffer, ptr);
}

std::string FormatCsv(const std::vector<EvalRow>& rows) {
  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  for (const EvalRow& row : rows) {
    csv << ClassName(row.sampler_class) << ',' << row.dim << ','
        << Optional(row.epsilon) << ',' << Optional(row.delta) << ','
        << Optional(row.rho) << ',' << FormatReal(row.alpha) << ',' << row.n
        << ',' << row.trials << ',' << FormatReal(row.tv_estimate) << ','
        << FormatReal(row.tv_slack) << ',' << Optional(row.audit_max_ratio)
        << ',' << row.seed << ',' << Optional(row.wall_time_s) << '\n';
  }
  return csv.str();
}

std::vector<EvalRow> ParseCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw IoError("CSV: missing or unexpected header");
  }
  std::vector<EvalRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != 13) throw IoError("CSV: expected 13 fields");
    EvalRow row;
    try {
      row.sampler_class = ParseClassName(f[0]);
    } catch (const ParameterError& e) {
      throw IoError(std::string("CSV: ") + e.what());
    }
    row.dim = CsvInteger<std::size_t>(f[1], "dim");
    row.epsilon = CsvOptional(f[2], "eps");
    row.delta = CsvOptional(f[3], "delta");
    row.rho = CsvOptional(f[4], "rho");
    row.alpha = CsvReal(f[5], "alpha");
    row.n = CsvInteger<std::size_t>(f[6], "n");
    row.trials = CsvInteger<std::size_t>(f[7], "trials");
    row.tv_estimate = CsvReal(f[8], "tv_estimate");
    row.tv_slack = CsvReal(f[9], "tv_slack");
    row.audit_max_ratio = CsvOptional(f[10], "audit_max_ratio");
    row.seed = CsvInteger<std::uint64_t>(f[11], "seed");
    row.wall_time_s = CsvOptional(f[12], "wall_time_s");
    rows.push_back(row);
  }
  return rows;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  Flags f;
  try {
    f.seed = DefaultSeed();
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }

  CLI::App app{"Differentially private single-sample generation.", "dpsample"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  auto add_common = [&f](CLI::App* cmd) {
    f.seed_opt = nullptr;
    cmd->add_option("--seed", f.seed, "Random seed (default: $DPS_SEED or 0)");
    cmd->add_option("--out", f.out, "Output file (default: standard output)");
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  };
  auto add_privacy = [&f](CLI::App* cmd) {
    cmd->add_option("--epsilon", f.epsilon, "Privacy parameter epsilon");
    cmd->add_option("--delta", f.delta, "Privacy parameter delta");
    cmd->add_option("--rho", f.rho, "zCDP parameter rho");
    cmd->add_option("--alpha", f.alpha, "Target accuracy alpha")
        ->capture_default_str();
  };

  CLI::App* sample = app.add_subcommand("sample", "Draw one private observation");
  add_common(sample);
  add_privacy(sample);
  sample->add_option("--class", f.sampler_class,
                     "kary | product | bounded-product | star")
      ->required();
  sample->add_option("--data", f.data, "Dataset file")->required();
  sample->add_option("--dim", f.dim, "Universe size k (k-ary) or k (star)");
  sample->add_option("--n", f.n, "Star class: Poisson mean of the input size");
  sample->add_option("--constant-scale", f.constant_scale,
                     "Product class: record-count multiplier");
  sample->add_option("-C,--c", f.c, "Star class: picker constant");

  CLI::App* eval = app.add_subcommand("eval", "Estimate TV accuracy at one grid point");
  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a config file");
  CLI::App* reduce = app.add_subcommand("reduce", "Run the star-class reduction pipeline");
  CLI::App* audit = app.add_subcommand("audit", "Privacy audits");
  for (CLI::App* cmd : {eval, sweep, reduce, audit}) {
    add_common(cmd);
    cmd->add_flag("--strict", f.strict, "Exit 1 when a contract bound is violated");
  }
  for (CLI::App* cmd : {eval, sweep, reduce}) {
    cmd->add_option("--config", f.config, "JSON sweep config");
    cmd->add_flag("--timing", f.timing, "Fill the wall_time_s column");
  }
  for (CLI::App* cmd : {eval, reduce}) {
    add_privacy(cmd);
    cmd->add_option("--dim", f.dim, "Dimension (k or d)");
    cmd->add_option("--n", f.n, "Dataset size (default: the class's formula)");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials")->capture_default_str();
    cmd->add_option("--constant-scale", f.constant_scale,
                    "Product sampler record-count multiplier");
  }
  eval->add_option("--class", f.sampler_class,
                   "kary | product | bounded-product | star");
  eval->add_option("--source", f.source, "uniform | skewed | random");
  eval->add_flag("--audits", f.audits, "Also run the class's privacy audit");
  eval->add_option("--inner", f.inner, "Star class inner sampler: prod | perfect");
  eval->add_option("-C,--c", f.c, "Star class: picker constant");
  reduce->add_option("--inner", f.inner, "Inner sampler: prod | perfect");
  reduce->add_option("-C,--c", f.c, "Picker constant")->capture_default_str();
  audit->add_flag("--clip", f.clip, "Exact audit of the clipped Bernoulli sampler");
  audit->add_option("--n-max", f.n_max, "Largest n for --clip")->capture_default_str();
  audit->add_option("--data", f.data, "k-ary dataset x");
  audit->add_option("--neighbor", f.neighbor, "k-ary dataset differing from x in one record");
  audit->add_option("--epsilon", f.epsilon, "Epsilon of the audited k-ary sampler");
  audit->add_option("--dim", f.dim, "Universe size k");
  audit->add_option("--trials", f.trials, "Trials per input")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }

  CLI::App* active = app.get_subcommands().front();
  auto find = [active](const char* name) -> CLI::Option* {
    try {
      return active->get_option(name);
    } catch (const CLI::OptionNotFound&) {
      return nullptr;
    }
  };
  f.epsilon_opt = find("--epsilon");
  f.delta_opt = find("--delta");
  f.rho_opt = find("--rho");
  f.alpha_opt = find("--alpha");
  f.seed_opt = find("--seed");
  f.dim_opt = find("--dim");
  f.n_opt = find("--n");
  f.class_opt = find("--class");

  try {
    if (active == sample) return CmdSample(f, out, err);
    if (active == eval) return CmdEval(f, out);
    if (active == sweep) return CmdSweep(f, out);
    if (active == reduce) return CmdReduce(f, out);
    return CmdAudit(f, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n" << active->help();
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace dpsample
