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

#include <Eigen/Dense>

#include "rsw/many_body.hpp"
#include "rsw/rotor.hpp"
#include "rsw/spinwave.hpp"

namespace rsw {

/// First and symmetrized second moments of the collective spin (Sx, Sy, Sz):
/// mean_a = <S_a>, second_ab = <{S_a, S_b}> / 2.
struct SpinMoments {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero();

  Eigen::Matrix3d covariance() const { return second - mean * mean.transpose(); }
  double total_spin_squared() const { return second.trace(); }
};

SpinMoments rotor_moments(const RotorState& state, const DickeOperators& ops);
SpinMoments many_body_moments(const ManyBodyState& state);

struct SqueezingResult {
  double xi_squared = 1.0;
  double xi_db = 0.0;     // -10 log10 xi^2
  double theta_min = 0.0; // optimal quadrature angle in [0, pi)
  double mean_kx = 0.0;
  double n_fm = 0.0;
};

/// RSW estimate N min_theta Var(K_theta) / (<Kx> - N_FM)^2 with
/// K_theta = cos(theta) Ky + sin(theta) Kz. Throws LostMeanSpinError when the
/// depleted mean spin <Kx> - N_FM falls below 1e-9 N.
SqueezingResult squeezing_from_rsw(const RotorState& rotor, const DickeOperators& ops, double n_fm);
SqueezingResult squeezing_from_rsw(const RotorState& rotor, const SpinWaveState& spin_waves, int n_spins);

/// Wineland parameter N (Delta S_perp,min)^2 / |<S>|^2, minimized in the plane
/// perpendicular to the actual mean-spin direction.
SqueezingResult squeezing_exact(const SpinMoments& moments, int n_spins);
SqueezingResult squeezing_exact(const ManyBodyState& state);

struct RswEstimate {
  double value = 0.0;
  bool approximate = true;
};

/// <S^2> ~ (N/2)(N/2 + 1) - N n_fm: each finite-momentum boson lowers the total spin by one.
RswEstimate total_spin_squared(const RotorState& rotor, const SpinWaveState& spin_waves, int n_spins);

/// sqrt((<Kx> - N_FM)^2 + <Ky>^2 + <Kz>^2).
double mean_spin_magnitude(const RotorState& rotor, const SpinWaveState& spin_waves, int n_spins);

/// Q(theta, phi) = <theta, phi| rho |theta, phi> on the given grid (rows: theta, cols: phi).
/// |theta, phi> = [cos(theta/2)|up> + sin(theta/2) e^{i phi}|down>]^N.
Eigen::MatrixXd husimi_q(const RotorState& state, const std::vector<double>& theta_grid,
                         const std::vector<double>& phi_grid);

/// Uniform grid of n points on [lo, hi] inclusive.
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace rsw
