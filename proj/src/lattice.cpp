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

#include "rsw/lattice.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rsw {

void LatticeSpec::validate() const {
  if (lx <= 0 || ly <= 0) {
    throw std::invalid_argument("lattice dimensions must be positive, got " + std::to_string(lx) +
                                "x" + std::to_string(ly));
  }
  if (n_sites() < 2) throw std::invalid_argument("lattice needs at least 2 sites");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("power-law exponent alpha must be positive");
  }
  if (!(coupling > 0.0) || !std::isfinite(coupling)) {
    throw std::invalid_argument("interaction scale J must be positive");
  }
}

std::array<int, 2> separation(const LatticeSpec& spec, int i, int j) {
  const auto [xi, yi] = spec.position(i);
  const auto [xj, yj] = spec.position(j);
  int dx = std::abs(xi - xj);
  int dy = std::abs(yi - yj);
  if (spec.boundary == Boundary::Periodic) {
    dx = std::min(dx, spec.lx - dx);
    dy = std::min(dy, spec.ly - dy);
  }
  return {dx, dy};
}

double CouplingMatrix::pair_sum() const {
  double total = 0.0;
  const int n = n_sites();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) total += values(i, j);
  }
  return total;
}

CouplingMatrix build_couplings(const LatticeSpec& spec) {
  spec.validate();
  const int n = spec.n_sites();
  CouplingMatrix out{Eigen::MatrixXd::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto [dx, dy] = separation(spec, i, j);
      const double d = std::hypot(static_cast<double>(dx), static_cast<double>(dy));
      const double value = 4.0 * spec.coupling * std::pow(d, -spec.alpha);
      out.values(i, j) = value;
      out.values(j, i) = value;
    }
  }
  return out;
}

double collective_chi(const CouplingMatrix& couplings) {
  const double n = couplings.n_sites();
  return 2.0 * couplings.pair_sum() / ((n - 1.0) * n);
}

std::array<double, 2> grid_momentum(const LatticeSpec& spec, int kx, int ky) {
  return {2.0 * std::numbers::pi * kx / spec.lx, 2.0 * std::numbers::pi * ky / spec.ly};
}

namespace {

bool on_grid(double q, int length) {
  const double k = q * length / (2.0 * std::numbers::pi);
  return std::abs(k - std::round(k)) < 1e-9;
}

}  // namespace

double fourier_coupling(const CouplingMatrix& couplings, const LatticeSpec& spec,
                        const std::array<double, 2>& q) {
  if (spec.boundary != Boundary::Periodic) {
    throw std::invalid_argument("fourier_coupling requires a periodic lattice");
  }
  if (!on_grid(q[0], spec.lx) || !on_grid(q[1], spec.ly)) {
    throw std::invalid_argument("momentum is not on the discrete Brillouin grid");
  }
  const int n = couplings.n_sites();
  std::complex<double> total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto ri = spec.position(i);
    for (int j = 0; j < n; ++j) {
      const auto rj = spec.position(j);
      const double phase = q[0] * (ri[0] - rj[0]) + q[1] * (ri[1] - rj[1]);
      total += std::polar(couplings(i, j), phase);
    }
  }
  return total.real() / n;
}

}  // namespace rsw
