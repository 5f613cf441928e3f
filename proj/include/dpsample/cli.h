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
// Command-line layer: data-file readers, JSON sweep configs, the CSV report
// schema, and the `dpsample` command dispatcher.

#ifndef DPSAMPLE_CLI_H_
#define DPSAMPLE_CLI_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpsample/datasets.h"
#include "dpsample/eval.h"

namespace dpsample {

// Whitespace-separated integers with an optional "# k=<k>" first line. The
// universe size is the header's k, else `k`, else the largest record.
// Throws IoError on unreadable or ill-formed input.
KAryDataset ParseKaryData(const std::string& text,
                          std::optional<std::size_t> k = std::nullopt);
KAryDataset ReadKaryData(const std::string& path,
                         std::optional<std::size_t> k = std::nullopt);

// One row of 0/1 characters per line, optional "# d=<d>" first line.
BinaryDataset ParseBinaryData(const std::string& text);
BinaryDataset ReadBinaryData(const std::string& path);

// Parses a JSON sweep config. Unknown keys and type mismatches raise
// ConfigError with the field path. A missing "seed" takes `default_seed`.
SweepConfig ParseSweepConfig(const std::string& json_text,
                             std::uint64_t default_seed);

inline constexpr const char* kCsvHeader =
    "class,dim,eps,delta,rho,alpha,n,trials,tv_estimate,tv_slack,"
    "audit_max_ratio,seed,wall_time_s";

// Header line plus one line per row. Reals use the shortest representation
// that round-trips.
std::string FormatCsv(const std::vector<EvalRow>& rows);
std::vector<EvalRow> ParseCsv(const std::string& text);

// Shortest round-trip decimal form of x.
std::string FormatReal(double x);

// Runs `dpsample <args...>`. argv[0] is the program name. Returns the
// process exit code: 0 success, 1 contract violation under --strict, 2 I/O
// error, 3 parameter or configuration error.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace dpsample

#endif  // DPSAMPLE_CLI_H_
