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

#include "rsw/observables.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rsw/error.hpp"

namespace rsw {

namespace {

using cplx = std::complex<double>;

struct Quadrature {
  double min_variance;
  double theta;
};

// Minimizes cos^2 vy + sin^2 vz + 2 sin cos c over theta in [0, pi).
Quadrature minimize_quadrature(double vy, double vz, double c) {
  const double half_diff = 0.5 * (vy - vz);
  const double radius = std::hypot(half_diff, c);
  const double mid = 0.5 * (vy + vz);
  if (radius <= 1e-12 * std::max(std::abs(mid), 1e-300)) return {mid - radius, 0.0};
  double theta = 0.5 * (std::atan2(c, half_diff) + std::numbers::pi);
  theta = std::fmod(theta, std::numbers::pi);
  if (theta < 0.0) theta += std::numbers::pi;
  return {mid - radius, theta};
}

double to_db(double xi2) { return -10.0 * std::log10(xi2); }

}  // namespace

SpinMoments rotor_moments(const RotorState& state, const DickeOperators& ops) {
  const std::array<Eigen::MatrixXcd, 3> k{ops.kx.cast<cplx>(), ops.ky, ops.kz.cast<cplx>()};
  SpinMoments out;
  if (state.kind() == RotorState::Kind::PureVector) {
    const Eigen::VectorXcd& psi = state.vector();
    std::array<Eigen::VectorXcd, 3> kpsi{k[0] * psi, k[1] * psi, k[2] * psi};
    for (int a = 0; a < 3; ++a) {
      out.mean(a) = psi.dot(kpsi[a]).real();
      for (int b = a; b < 3; ++b) {
        out.second(a, b) = out.second(b, a) = kpsi[a].dot(kpsi[b]).real();
      }
    }
  } else {
    const Eigen::MatrixXcd& rho = state.density();
    std::array<Eigen::MatrixXcd, 3> krho{k[0] * rho, k[1] * rho, k[2] * rho};
    for (int a = 0; a < 3; ++a) {
      out.mean(a) = krho[a].trace().real();
      for (int b = a; b < 3; ++b) {
        out.second(a, b) = out.second(b, a) = (k[a] * krho[b]).trace().real();
      }
    }
  }
  return out;
}

SqueezingResult squeezing_from_rsw(const RotorState& rotor, const DickeOperators& ops, double n_fm) {
  const SpinMoments mom = rotor_moments(rotor, ops);
  const Eigen::Matrix3d cov = mom.covariance();
  const Quadrature quad = minimize_quadrature(cov(1, 1), cov(2, 2), cov(1, 2));
  const double denominator = mom.mean(0) - n_fm;
  const int n = ops.n_spins;
  // Spin waves are expanded about +x, so a depletion that reaches the rotor length
  // leaves the theory without a mean spin to squeeze around.
  if (denominator < 1e-9 * n) {
    throw LostMeanSpinError("mean spin lost: <Kx> - N_FM = " + std::to_string(denominator));
  }
  SqueezingResult out;
  out.xi_squared = n * quad.min_variance / (denominator * denominator);
  out.xi_db = to_db(out.xi_squared);
  out.theta_min = quad.theta;
  out.mean_kx = mom.mean(0);
  out.n_fm = n_fm;
  return out;
}

SqueezingResult squeezing_from_rsw(const RotorState& rotor, const SpinWaveState& spin_waves, int n_spins) {
  if (rotor.n_spins() != n_spins) throw std::invalid_argument("rotor size does not match n_spins");
  return squeezing_from_rsw(rotor, build_dicke_operators(n_spins), spin_waves.n_fm());
}

SqueezingResult squeezing_exact(const SpinMoments& moments, int n_spins) {
  const double length = moments.mean.norm();
  if (length < 1e-9 * n_spins) {
    throw LostMeanSpinError("mean spin lost: |<S>| = " + std::to_string(length));
  }
  const Eigen::Vector3d axis = moments.mean / length;
  // e1 = z x n (the y axis when n = x), e2 = n x e1 (the z axis when n = x).
  Eigen::Vector3d e1 = Eigen::Vector3d::UnitZ().cross(axis);
  if (e1.norm() < 1e-6) e1 = axis.cross(Eigen::Vector3d::UnitX());
  e1.normalize();
  const Eigen::Vector3d e2 = axis.cross(e1);
  const Eigen::Matrix3d cov = moments.covariance();
  const Quadrature quad =
      minimize_quadrature(e1.dot(cov * e1), e2.dot(cov * e2), e1.dot(cov * e2));
  SqueezingResult out;
  out.xi_squared = n_spins * quad.min_variance / (length * length);
  out.xi_db = to_db(out.xi_squared);
  out.theta_min = quad.theta;
  out.mean_kx = moments.mean(0);
  return out;
}

SqueezingResult squeezing_exact(const ManyBodyState& state) {
  return squeezing_exact(many_body_moments(state), state.n_spins());
}

RswEstimate total_spin_squared(const RotorState& rotor, const SpinWaveState& spin_waves, int n_spins) {
  if (rotor.n_spins() != n_spins) throw std::invalid_argument("rotor size does not match n_spins");
  const double j = 0.5 * n_spins;
  return {j * (j + 1.0) - n_spins * spin_waves.n_fm(), true};
}

double mean_spin_magnitude(const RotorState& rotor, const SpinWaveState& spin_waves, int n_spins) {
  if (rotor.n_spins() != n_spins) throw std::invalid_argument("rotor size does not match n_spins");
  const DickeOperators ops = build_dicke_operators(n_spins);
  const double sx = rotor.expectation(ops.kx).real() - spin_waves.n_fm();
  const double sy = rotor.expectation(ops.ky).real();
  const double sz = rotor.expectation(ops.kz).real();
  return std::sqrt(sx * sx + sy * sy + sz * sz);
}

Eigen::MatrixXd husimi_q(const RotorState& state, const std::vector<double>& theta_grid,
                         const std::vector<double>& phi_grid) {
  if (theta_grid.empty() || phi_grid.empty()) throw std::invalid_argument("Husimi grids must be non-empty");
  const int n = state.n_spins();
  Eigen::VectorXd log_binom(n + 1);
  for (int k = 0; k <= n; ++k) {
    log_binom(k) = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
  }
  const bool pure = state.kind() == RotorState::Kind::PureVector;
  Eigen::MatrixXd q(theta_grid.size(), phi_grid.size());
  Eigen::VectorXcd coherent(n + 1);
  for (std::size_t a = 0; a < theta_grid.size(); ++a) {
    const double c = std::cos(0.5 * theta_grid[a]);
    const double s = std::sin(0.5 * theta_grid[a]);
    for (std::size_t b = 0; b < phi_grid.size(); ++b) {
      // Basis index k holds m = k - N/2, i.e. k spins up and N - k down.
      for (int k = 0; k <= n; ++k) {
        const int down = n - k;
        const double mag = std::exp(log_binom(k)) * std::pow(c, k) * std::pow(s, down);
        coherent(k) = std::polar(mag, phi_grid[b] * down);
      }
      const double value = pure ? std::norm(coherent.dot(state.vector()))
                                : coherent.dot(state.density() * coherent).real();
      q(a, b) = value;
    }
  }
  return q;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("grid needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

}  // namespace rsw
