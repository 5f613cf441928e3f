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

#include "dpsample/privacy.h"

#include <cmath>
#include <sstream>

#include "dpsample/errors.h"

namespace dpsample {

PrivacyBudget PrivacyBudget::Approx(double epsilon, double delta) {
  if (!(epsilon > 0.0) || std::isinf(epsilon)) {
    throw ParameterError("epsilon must be positive and finite");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw ParameterError("delta must lie in [0, 1)");
  }
  return PrivacyBudget(ApproxDp{epsilon, delta});
}

PrivacyBudget PrivacyBudget::Concentrated(double rho) {
  if (!(rho > 0.0) || std::isinf(rho)) {
    throw ParameterError("rho must be positive and finite");
  }
  return PrivacyBudget(Zcdp{rho});
}

std::string PrivacyBudget::ToString() const {
  std::ostringstream out;
  if (is_zcdp()) {
    out << "rho=" << zcdp().rho;
  } else {
    out << "epsilon=" << approx().epsilon << ",delta=" << approx().delta;
  }
  return out.str();
}

double ZcdpFromPureDp(double epsilon) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  return 0.5 * epsilon * epsilon;
}

ApproxDp ApproxDpFromZcdp(double rho, double delta) {
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("delta must lie in (0, 1)");
  }
  return {rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta)), delta};
}

double ZcdpForApproxDp(double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("delta must lie in (0, 1)");
  }
  const double log_term = std::log(1.0 / delta);
  const double root = std::sqrt(log_term + epsilon) - std::sqrt(log_term);
  return root * root;
}

ApproxDp AmplifyBySubsampling(ApproxDp inner, double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw ParameterError("subsampling rate must lie in (0, 1]");
  }
  if (rate == 1.0) return inner;
  return {std::log1p(rate * std::expm1(inner.epsilon)), rate * inner.delta};
}

}  // namespace dpsample
