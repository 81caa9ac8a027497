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

#include <array>

#include <Eigen/Dense>

namespace rsw {

enum class Boundary { Periodic, Open };

/// Rectangular 2D lattice with unit spacing and power-law couplings
/// J_ij = 4 J d_ij^-alpha. Sites are indexed row-major, i = y * lx + x.
struct LatticeSpec {
  int lx = 1;
  int ly = 1;
  Boundary boundary = Boundary::Periodic;
  double alpha = 3.0;
  double coupling = 1.0;  // J, carries the energy unit

  int n_sites() const { return lx * ly; }
  std::array<int, 2> position(int site) const { return {site % lx, site / lx}; }

  // Throws std::invalid_argument when the lattice violates its invariants.
  void validate() const;
};

/// Symmetric N x N coupling matrix with zero diagonal (energy units).
struct CouplingMatrix {
  Eigen::MatrixXd values;

  int n_sites() const { return static_cast<int>(values.rows()); }
  double operator()(int i, int j) const { return values(i, j); }
  double row_sum(int i) const { return values.row(i).sum(); }
  double pair_sum() const;  // sum_{i<j} J_ij
};

/// Component-wise separation; minimum image along periodic directions.
std::array<int, 2> separation(const LatticeSpec& spec, int i, int j);

CouplingMatrix build_couplings(const LatticeSpec& spec);

/// chi = 2 sum_{i<j} J_ij / ((N - 1) N), the collective twisting strength.
double collective_chi(const CouplingMatrix& couplings);

/// J_q = (1/N) sum_ij exp(i q.(r_i - r_j)) J_ij on the periodic Brillouin grid.
/// Throws std::invalid_argument for open lattices or off-grid momenta.
double fourier_coupling(const CouplingMatrix& couplings, const LatticeSpec& spec,
                        const std::array<double, 2>& q);

/// Momentum for grid indices (kx, ky): q = (2 pi kx / lx, 2 pi ky / ly).
std::array<double, 2> grid_momentum(const LatticeSpec& spec, int kx, int ky);

}  // namespace rsw
