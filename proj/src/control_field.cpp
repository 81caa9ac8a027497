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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsw/control_field.hpp"

namespace rsw {

int ControlField::segment_at(double t) const {
  const int k = static_cast<int>(std::floor(t / segment_duration()));
  return std::clamp(k, 0, n_segments() - 1);
}

void ControlField::validate(double h_max) const {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw std::invalid_argument("control field duration must be positive and finite");
  }
  if (segments.empty()) throw std::invalid_argument("control field needs at least one segment");
  for (double h : segments) {
    if (!std::isfinite(h)) throw std::invalid_argument("control field contains a non-finite value");
    if (std::abs(h) > h_max) throw std::invalid_argument("control field exceeds the |h| bound");
  }
}

ControlField ControlField::constant(double total_time, int n_segments, double value) {
  return ControlField{total_time, std::vector<double>(static_cast<std::size_t>(n_segments), value)};
}

std::vector<double> uniform_samples(double total_time, int n_samples) {
  if (n_samples < 1) throw std::invalid_argument("need at least one sample time");
  if (n_samples == 1) return {total_time};
  std::vector<double> out(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) out[i] = total_time * i / (n_samples - 1);
  out.back() = total_time;
  return out;
}

}  // namespace rsw
