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

#ifndef DPSAMPLE_PRIVACY_H_
#define DPSAMPLE_PRIVACY_H_

#include <string>
#include <variant>

namespace dpsample {

struct ApproxDp {
  double epsilon;
  double delta;
};

struct Zcdp {
  double rho;
};

// Either an (epsilon, delta) or a rho-zCDP guarantee. Validated on
// construction: epsilon > 0, delta in [0, 1), rho > 0.
class PrivacyBudget {
 public:
  static PrivacyBudget Approx(double epsilon, double delta = 0.0);
  static PrivacyBudget Concentrated(double rho);

  bool is_zcdp() const { return std::holds_alternative<Zcdp>(value_); }
  const ApproxDp& approx() const { return std::get<ApproxDp>(value_); }
  const Zcdp& zcdp() const { return std::get<Zcdp>(value_); }

  std::string ToString() const;

 private:
  explicit PrivacyBudget(std::variant<ApproxDp, Zcdp> value)
      : value_(value) {}

  std::variant<ApproxDp, Zcdp> value_;
};

// (epsilon, 0)-DP implies (epsilon^2 / 2)-zCDP.
double ZcdpFromPureDp(double epsilon);

// rho-zCDP implies (rho + 2 sqrt(rho ln(1/delta)), delta)-DP for delta > 0.
ApproxDp ApproxDpFromZcdp(double rho, double delta);

// Largest rho whose conversion above gives (epsilon, delta):
// (sqrt(ln(1/delta) + epsilon) - sqrt(ln(1/delta)))^2. Requires delta > 0.
double ZcdpForApproxDp(double epsilon, double delta);

// Privacy of running an (epsilon, delta)-DP algorithm on a Bernoulli
// subsample of the input taken at `rate`:
// (ln(1 + rate (e^epsilon - 1)), rate delta).
ApproxDp AmplifyBySubsampling(ApproxDp inner, double rate);

}  // namespace dpsample

#endif  // DPSAMPLE_PRIVACY_H_
