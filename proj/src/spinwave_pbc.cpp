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

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rsw/error.hpp"
#include "rsw/spinwave.hpp"

namespace rsw {

QuadraticHamiltonian build_quadratic(const CouplingMatrix& couplings, double h, double spin) {
  const int n = couplings.n_sites();
  QuadraticHamiltonian quad;
  quad.h = h;
  quad.spin = spin;
  quad.a = -0.5 * spin * couplings.values;
  quad.b = -0.5 * spin * couplings.values;
  for (int i = 0; i < n; ++i) quad.a(i, i) += spin * couplings.row_sum(i) + h;
  // -h (N S - sum_i n_i): the c-number part of the field term.
  quad.constant_offset = -h * n * spin;
  return quad;
}

Eigen::MatrixXd QuadraticHamiltonian::bdg_matrix() const {
  const int n = n_sites();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m << a, b, b, a;
  return m;
}

Eigen::MatrixXd nambu_eta(int n_sites) {
  Eigen::VectorXd diag(2 * n_sites);
  diag << Eigen::VectorXd::Ones(n_sites), -Eigen::VectorXd::Ones(n_sites);
  return diag.asDiagonal();
}

Eigen::MatrixXd nambu_gamma(int n_sites) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n_sites, 2 * n_sites);
  g.topRightCorner(n_sites, n_sites).setIdentity();
  g.bottomLeftCorner(n_sites, n_sites).setIdentity();
  return g;
}

double PbcModeSet::n_fm() const {
  double total = 0.0;
  for (const auto& mode : modes) total += mode.n_q;
  return total;
}

void PbcModeSet::set_field(double field) {
  h = field;
  for (auto& mode : modes) {
    mode.a_q = spin * (j0 - 0.5 * mode.j_q) + field;
    mode.b_q = -0.5 * spin * mode.j_q;
    const double gap = mode.a_q * mode.a_q - mode.b_q * mode.b_q;
    mode.eps_q = gap >= 0.0 ? std::sqrt(gap) : std::numeric_limits<double>::quiet_NaN();
  }
}

PbcModeSet pbc_vacuum(const CouplingMatrix& couplings, const LatticeSpec& spec) {
  if (spec.boundary != Boundary::Periodic) {
    throw std::invalid_argument("momentum-space spin waves require a periodic lattice");
  }
  PbcModeSet set;
  set.j0 = fourier_coupling(couplings, spec, {0.0, 0.0});
  for (int ky = 0; ky < spec.ly; ++ky) {
    for (int kx = 0; kx < spec.lx; ++kx) {
      if (kx == 0 && ky == 0) continue;
      PbcMode mode;
      mode.k = {kx, ky};
      mode.j_q = fourier_coupling(couplings, spec, grid_momentum(spec, kx, ky));
      set.modes.push_back(mode);
    }
  }
  set.set_field(0.0);
  return set;
}

PbcModeSet pbc_mode_spectrum(const CouplingMatrix& couplings, const LatticeSpec& spec, double h) {
  PbcModeSet set = pbc_vacuum(couplings, spec);
  set.set_field(h);
  for (const auto& mode : set.modes) {
    // A_q < -|B_q| still has a real gap but no longer a stable vacuum.
    if (mode.a_q < std::abs(mode.b_q) * (1.0 - 1e-12)) {
      throw InstabilityError("spin-wave mode (" + std::to_string(mode.k[0]) + ", " +
                             std::to_string(mode.k[1]) + ") is unstable at h = " +
                             std::to_string(h));
    }
  }
  return set;
}

namespace {

// exp(-i G tau) for G = [[A, B], [-B, -A]], using G^2 = (A^2 - B^2) I.
Eigen::Matrix2cd mode_propagator(double a, double b, double tau) {
  const double s = a * a - b * b;
  double c = 0.0;
  double f = 0.0;
  const double x = s * tau * tau;
  if (std::abs(x) < 1e-8) {
    c = 1.0 - 0.5 * x;
    f = tau * (1.0 - x / 6.0);
  } else if (s > 0.0) {
    const double eps = std::sqrt(s);
    c = std::cos(eps * tau);
    f = std::sin(eps * tau) / eps;
  } else {
    const double kappa = std::sqrt(-s);
    c = std::cosh(kappa * tau);
    f = std::sinh(kappa * tau) / kappa;
  }
  Eigen::Matrix2cd u;
  const std::complex<double> mi(0.0, -f);
  u << c + mi * a, mi * b, -mi * b, c - mi * a;
  return u;
}

}  // namespace

PbcTrajectory evolve_pbc_modes(const PbcModeSet& state, const ControlField& field,
                               const std::vector<double>& times) {
  field.validate();
  PbcTrajectory out;
  out.times = times;
  PbcModeSet current = state;
  walk_field(
      field, times,
      [&](double h, double tau) {
        current.set_field(h);
        for (auto& mode : current.modes) {
          const Eigen::Matrix2cd u = mode_propagator(mode.a_q, mode.b_q, tau);
          // Second moments of (a_q, a_-q^+).
          Eigen::Matrix2cd x;
          x << 1.0 + mode.n_q, mode.m_q, std::conj(mode.m_q), mode.n_q;
          const Eigen::Matrix2cd y = u * x * u.adjoint();
          mode.n_q = y(1, 1).real();
          mode.m_q = y(0, 1);
        }
      },
      [&](std::size_t) { out.states.push_back(current); });
  return out;
}

double SpinWaveState::n_fm() const {
  return std::visit([](const auto& rep) { return rep.n_fm(); }, representation);
}

SpinWaveState SpinWaveState::empty() { return SpinWaveState{PbcModeSet{}}; }

}  // namespace rsw
