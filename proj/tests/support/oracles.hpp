// Copyright 2026 The rswsqueeze Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Independent reference formulas used by the tests.

#include <cmath>

namespace rsw::testing {

// Kitagawa-Ueda one-axis twisting under chi Sz^2 from the +x coherent state,
// converted to the Wineland parameter by the mean-spin contraction cos^{N-1}(chi t).
inline double ku_wineland(int n, double chi_t) {
  const double a = 1.0 - std::pow(std::cos(2.0 * chi_t), n - 2);
  const double b = 4.0 * std::sin(chi_t) * std::pow(std::cos(chi_t), n - 2);
  const double kitagawa = 1.0 + 0.25 * (n - 1) * (a - std::sqrt(a * a + b * b));
  return kitagawa / std::pow(std::cos(chi_t), 2 * (n - 1));
}

inline double to_db(double xi2) { return -10.0 * std::log10(xi2); }

}  // namespace rsw::testing
