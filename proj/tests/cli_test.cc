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

#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dpsample/errors.h"
#include "gtest/gtest.h"

namespace dpsample {
namespace {

std::string WriteTemp(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + "/" + name;
  std::ofstream(path) << body;
  return path;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunTool(std::vector<std::string> args) {
  args.insert(args.begin(), "dpsample");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(ParseKaryDataTest, HeaderAndInference) {
  const KAryDataset a = ParseKaryData("# k=5\n1 2 3\n4\n");
  EXPECT_EQ(a.k(), 5u);
  EXPECT_EQ(a.size(), 4u);
  EXPECT_EQ(ParseKaryData("1 3 2").k(), 3u);
  EXPECT_EQ(ParseKaryData("1 3 2", 7).k(), 7u);
  EXPECT_THROW(ParseKaryData("# k=2\n1 3"), IoError);
  EXPECT_THROW(ParseKaryData("1 x 2"), IoError);
  EXPECT_THROW(ParseKaryData("0 1"), IoError);
}

TEST(ParseBinaryDataTest, RowsAndErrors) {
  const BinaryDataset x = ParseBinaryData("# d=3\n101\n011\n");
  EXPECT_EQ(x.rows(), 2u);
  EXPECT_EQ(x.cols(), 3u);
  EXPECT_TRUE(x.Get(0, 0));
  EXPECT_FALSE(x.Get(0, 1));
  EXPECT_THROW(ParseBinaryData("101\n01\n"), IoError);
  EXPECT_THROW(ParseBinaryData("1a1\n"), IoError);
  EXPECT_THROW(ParseBinaryData("# d=4\n101\n"), IoError);
  EXPECT_THROW(ParseBinaryData(""), IoError);
}

TEST(FormatRealTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatReal(0.1), "0.1");
  EXPECT_EQ(FormatReal(2.0), "2");
  for (double v : {1.0 / 3.0, 1e-300, 123456.789, std::numeric_limits<double>::max()}) {
    EXPECT_EQ(std::stod(FormatReal(v)), v);
  }
}

TEST(CsvTest, RoundTrip) {
  EvalRow a;
  a.sampler_class = SamplerClass::kKary;
  a.dim = 10;
  a.epsilon = 1.0;
  a.delta = 0.0;
  a.alpha = 0.1;
  a.n = 200;
  a.trials = 1000;
  a.tv_estimate = 1.0 / 7.0;
  a.tv_slack = 0.1;
  a.audit_max_ratio = 2.5;
  a.seed = 42;
  EvalRow b;
  b.sampler_class = SamplerClass::kBoundedProduct;
  b.dim = 64;
  b.rho = 0.5;
  b.alpha = 0.25;
  b.n = 595;
  b.trials = 5;
  b.tv_estimate = 0.3;
  b.wall_time_s = 0.125;
  const std::vector<EvalRow> rows = {a, b};
  const std::string csv = FormatCsv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_EQ(ParseCsv(csv), rows);
  EXPECT_THROW(ParseCsv("nope\n"), IoError);
  EXPECT_THROW(ParseCsv(std::string(kCsvHeader) + "\nkary,1\n"), IoError);
}

constexpr const char* kGoodConfig = R"({
  "class": "kary",
  "dims": [3],
  "privacy": [{"epsilon": 1.0}],
  "alphas": [0.3],
  "n_rule": {"kind": "formula", "scale": 1.0},
  "trials": 500,
  "audits": true
})";

std::string FieldOf(const std::string& json) {
  try {
    ParseSweepConfig(json, 0);
  } catch (const ConfigError& e) {
    return e.field_path();
  }
  return "<no error>";
}

TEST(ParseSweepConfigTest, GoodConfig) {
  const SweepConfig c = ParseSweepConfig(kGoodConfig, 9);
  EXPECT_EQ(c.sampler_class, SamplerClass::kKary);
  EXPECT_EQ(c.dims, std::vector<std::size_t>{3});
  EXPECT_EQ(c.seed, 9u);
  EXPECT_TRUE(c.audits);
  EXPECT_FALSE(c.n_rule.explicit_values);
}

TEST(ParseSweepConfigTest, ErrorsNameTheField) {
  std::string j = kGoodConfig;
  EXPECT_EQ(FieldOf(R"({"class": "kary"})"), "dims");
  EXPECT_EQ(FieldOf(std::string(kGoodConfig).replace(j.find("[3]"), 3, "[3, -1]")),
            "dims[1]");
  EXPECT_EQ(FieldOf(std::string(kGoodConfig).replace(j.find("1.0}"), 3, "\"x\"")),
            "privacy[0].epsilon");
  EXPECT_EQ(FieldOf(std::string(kGoodConfig).replace(j.find("500"), 3, "0")),
            "trials");
  EXPECT_EQ(FieldOf(std::string(kGoodConfig).replace(j.find("\"trials\""), 8,
                                                     "\"trails\"")),
            "trails");
  EXPECT_EQ(FieldOf("{not json"), "<root>");
  EXPECT_EQ(FieldOf(std::string(kGoodConfig).replace(j.find("\"kary\""), 6,
                                                     "\"gauss\"")),
            "class");
}

TEST(RunCliTest, ExitCodes) {
  const std::string data = WriteTemp("kary.txt", "# k=3\n1 2 3 1 2 3\n");
  EXPECT_EQ(RunTool({"sample", "--class", "kary", "--data", data}).code, 3);
  EXPECT_EQ(RunTool({"sample", "--class", "kary", "--data", "/no/such/file",
                 "--epsilon", "1"}).code, 2);
  EXPECT_EQ(RunTool({"eval", "--class", "kary", "--dim", "3", "--epsilon", "1",
                 "--trials", "0"}).code, 3);
  EXPECT_EQ(RunTool({"frobnicate"}).code, 3);
  EXPECT_EQ(RunTool({"sweep"}).code, 3);
  EXPECT_EQ(RunTool({"sample", "--class", "kary", "--data", data, "--epsilon",
                 "1"}).code, 0);
}

TEST(RunCliTest, SampleIsSeedDeterministic) {
  const std::string data = WriteTemp("kary2.txt", "# k=4\n1 2 3 4 4 4\n");
  const CliResult a = RunTool({"sample", "--class", "kary", "--data", data,
                           "--epsilon", "0.5", "--seed", "11"});
  const CliResult b = RunTool({"sample", "--class", "kary", "--data", data,
                           "--epsilon", "0.5", "--seed", "11"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.err.find("\"seed\":11"), std::string::npos);
}

TEST(RunCliTest, BoundedProductChecksBudget) {
  const std::string data = WriteTemp("bits.txt", "110\n011\n");
  // 8 d / n^2 = 6 > 1.
  EXPECT_EQ(RunTool({"sample", "--class", "bounded-product", "--data", data,
                 "--rho", "1"}).code, 3);
  const CliResult ok = RunTool({"sample", "--class", "bounded-product", "--data",
                            data, "--rho", "6"});
  ASSERT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.size(), 4u);
}

TEST(RunCliTest, EvalConfigMatchesFlagsAndSeedOverride) {
  const std::string config = WriteTemp("good.json", kGoodConfig);
  const CliResult from_config = RunTool({"eval", "--config", config, "--seed", "3"});
  const CliResult from_flags =
      RunTool({"eval", "--class", "kary", "--dim", "3", "--epsilon", "1", "--alpha",
           "0.3", "--trials", "500", "--audits", "--seed", "3"});
  ASSERT_EQ(from_config.code, 0) << from_config.err;
  ASSERT_EQ(from_flags.code, 0) << from_flags.err;
  EXPECT_EQ(from_config.out, from_flags.out);
  const auto rows = ParseCsv(from_config.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].seed, 3u);
  EXPECT_FALSE(rows[0].wall_time_s.has_value());
  EXPECT_EQ(RunTool({"eval", "--config", config, "--strict"}).code, 0);
}

TEST(RunCliTest, StrictFlagsViolation) {
  // n = 1 is far too small for alpha = 0.01 on a skewed source.
  const CliResult r = RunTool({"eval", "--class", "kary", "--dim", "8", "--epsilon",
                           "0.1", "--alpha", "0.01", "--n", "1", "--trials",
                           "2000", "--source", "skewed", "--strict"});
  EXPECT_EQ(r.code, 1);
}

TEST(RunCliTest, AuditClipCsv) {
  const CliResult r = RunTool({"audit", "--clip", "--n-max", "5"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,max_ratio,bound");
  int count = 0;
  while (std::getline(in, line)) ++count;
  EXPECT_EQ(count, 5);
}

TEST(RunCliTest, AuditKary) {
  const std::string x = WriteTemp("x.txt", "# k=3\n1 2 3 1\n");
  const std::string xp = WriteTemp("xp.txt", "# k=3\n2 2 3 1\n");
  const CliResult r = RunTool({"audit", "--data", x, "--neighbor", xp, "--epsilon",
                           "1", "--trials", "2000", "--strict"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "element,count_x,count_x_prime,lo_x,hi_x,lo_x_prime,hi_x_prime,"
            "adjusted_ratio,bound,flagged");
  const std::string far = WriteTemp("far.txt", "# k=3\n2 3 3 1\n");
  EXPECT_EQ(RunTool({"audit", "--data", x, "--neighbor", far, "--epsilon", "1"}).code,
            3);
}

TEST(RunCliTest, ReduceNeedsDeltaForProdInner) {
  EXPECT_EQ(RunTool({"reduce", "--dim", "2", "--epsilon", "1", "--alpha", "0.01"}).code,
            3);
}

TEST(RunCliTest, OutputFile) {
  const std::string path = ::testing::TempDir() + "/audit_out.csv";
  ASSERT_EQ(RunTool({"audit", "--clip", "--n-max", "2", "--out", path}).code, 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "n,max_ratio,bound");
}

}  // namespace
}  // namespace dpsample
