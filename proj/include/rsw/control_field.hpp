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

#include <vector>

namespace rsw {

/// Piecewise-constant transverse field h(t) on [0, T]; segment k covers
/// [k T / M, (k + 1) T / M). Values in units of J, times in units of 1/J.
struct ControlField {
  double total_time = 1.0;
  std::vector<double> segments;

  int n_segments() const { return static_cast<int>(segments.size()); }
  double segment_duration() const { return total_time / n_segments(); }
  double segment_start(int k) const { return k * segment_duration(); }
  // Index of the segment containing t; t == T maps to the last segment.
  int segment_at(double t) const;
  double value_at(double t) const { return segments[segment_at(t)]; }

  // Throws std::invalid_argument on T <= 0, M == 0, non-finite values or |h_k| > h_max.
  void validate(double h_max = 1e300) const;

  static ControlField constant(double total_time, int n_segments, double value);
};

/// Uniformly spaced sample times 0, T/(n-1), ..., T (n >= 2), or {T} when n == 1.
std::vector<double> uniform_samples(double total_time, int n_samples);

// Walks a piecewise-constant field through a sorted list of sample times, calling
// advance(h, dt) for every constant-field stretch and sample(index) whenever a
// sample time is reached. Samples at t = 0 are emitted before any propagation.
template <class Advance, class Sample>
void walk_field(const ControlField& field, const std::vector<double>& times, Advance&& advance,
                Sample&& sample) {
  double t = 0.0;
  std::size_t next = 0;
  while (next < times.size() && times[next] <= 0.0) sample(next++);
  for (int k = 0; k < field.n_segments(); ++k) {
    const double end = (k + 1 == field.n_segments()) ? field.total_time : field.segment_start(k + 1);
    while (next < times.size() && times[next] <= end) {
      if (times[next] > t) {
        advance(field.segments[k], times[next] - t);
        t = times[next];
      }
      sample(next++);
    }
    if (end > t) {
      advance(field.segments[k], end - t);
      t = end;
    }
  }
}

}  // namespace rsw
