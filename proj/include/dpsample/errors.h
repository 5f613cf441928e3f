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

#ifndef DPSAMPLE_ERRORS_H_
#define DPSAMPLE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpsample {

// Out-of-range or otherwise invalid argument to an operation.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Two objects that must agree in size (k, d, row count) do not.
class DimensionError : public ParameterError {
 public:
  explicit DimensionError(const std::string& what) : ParameterError(what) {}
};

// Malformed configuration. `field_path` names the offending key, e.g.
// "privacy[1].value".
class ConfigError : public ParameterError {
 public:
  ConfigError(std::string field_path, const std::string& what)
      : ParameterError(field_path + ": " + what),
        field_path_(std::move(field_path)) {}

  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

// Unreadable or ill-formed input file.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace dpsample

#endif  // DPSAMPLE_ERRORS_H_
