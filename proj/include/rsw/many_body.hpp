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

#include <variant>

#include <Eigen/Dense>

namespace rsw {

inline constexpr int kMaxPureSpins = 16;
inline constexpr int kMaxDensitySpins = 10;

/// Full 2^N state of N spin-1/2 sites. Site i maps to bit i of the basis index and
/// bit value 0 means spin up (S^z_i = +1/2), so index 0 is |up ... up>.
class ManyBodyState {
 public:
  static ManyBodyState pure(int n_spins, Eigen::VectorXcd amplitudes);
  static ManyBodyState mixed(int n_spins, Eigen::MatrixXcd density);

  int n_spins() const { return n_spins_; }
  Eigen::Index dimension() const { return Eigen::Index{1} << n_spins_; }
  bool is_pure() const { return std::holds_alternative<Eigen::VectorXcd>(data_); }
  const Eigen::VectorXcd& vector() const { return std::get<Eigen::VectorXcd>(data_); }
  const Eigen::MatrixXcd& density() const { return std::get<Eigen::MatrixXcd>(data_); }
  ManyBodyState to_density() const;

 private:
  ManyBodyState(int n, std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data)
      : n_spins_(n), data_(std::move(data)) {}
  int n_spins_ = 0;
  std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data_;
};

// +1/2 for spin up (bit clear), -1/2 for spin down.
inline double site_sz(Eigen::Index basis, int site) { return ((basis >> site) & 1) ? -0.5 : 0.5; }

}  // namespace rsw
