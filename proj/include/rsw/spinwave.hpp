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
#include <complex>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rsw/control_field.hpp"
#include "rsw/lattice.hpp"

namespace rsw {

// Spin length of the physical lattice sites.
inline constexpr double kSpinHalf = 0.5;

/// Linearized Holstein-Primakoff Hamiltonian about the +x polarized state:
///   H2 = sum_ij a_i^+ A_ij a_j + (a_i^+ B_ij a_j^+ + h.c.) / 2 + constant_offset
/// with A_ij = delta_ij (S sum_k J_ik + h) - S J_ij / 2 and B_ij = -S J_ij / 2.
struct QuadraticHamiltonian {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  double h = 0.0;
  double spin = kSpinHalf;
  double constant_offset = 0.0;

  int n_sites() const { return static_cast<int>(a.rows()); }
  // M = [[A, B], [B*, A*]] acting on the Nambu spinor (a_1..a_N, a_1^+..a_N^+).
  Eigen::MatrixXd bdg_matrix() const;
};

QuadraticHamiltonian build_quadratic(const CouplingMatrix& couplings, double h, double spin = kSpinHalf);

/// eta = diag(I_N, -I_N) and gamma = [[0, I_N], [I_N, 0]] in Nambu space.
Eigen::MatrixXd nambu_eta(int n_sites);
Eigen::MatrixXd nambu_gamma(int n_sites);

// ---------------------------------------------------------------------------
// Periodic lattices: one decoupled (q, -q) Bogoliubov problem per momentum.

struct PbcMode {
  std::array<int, 2> k{};  // grid indices
  double j_q = 0.0;
  double a_q = 0.0;
  double b_q = 0.0;
  double eps_q = 0.0;  // sqrt(A_q^2 - B_q^2); NaN when the mode is unstable at this field
  double n_q = 0.0;                // <a_q^+ a_q>
  std::complex<double> m_q = 0.0;  // <a_q a_-q>
};

struct PbcModeSet {
  double j0 = 0.0;
  double h = 0.0;
  double spin = kSpinHalf;
  std::vector<PbcMode> modes;  // every q != 0 of the grid

  double n_fm() const;
  // Recomputes A_q, B_q, eps_q for a new field without touching occupations.
  void set_field(double field);
};

/// Static spectrum at field h, in the HP vacuum. Throws InstabilityError when
/// A_q < |B_q| for some q.
PbcModeSet pbc_mode_spectrum(const CouplingMatrix& couplings, const LatticeSpec& spec, double h);

/// The HP vacuum without the stability check (used as the initial condition of driven runs).
PbcModeSet pbc_vacuum(const CouplingMatrix& couplings, const LatticeSpec& spec);

struct PbcTrajectory {
  std::vector<double> times;
  std::vector<PbcModeSet> states;
};

/// Exact segment-wise evolution of (n_q, m_q) through the 2x2 Bogoliubov propagator
/// exp(-i G t), G = [[A_q, B_q], [-B_q, -A_q]]. Segments where a mode is dynamically
/// unstable propagate with the hyperbolic branch of the same exponential.
PbcTrajectory evolve_pbc_modes(const PbcModeSet& state, const ControlField& field,
                               const std::vector<double>& times);

// ---------------------------------------------------------------------------
// Open lattices: full BdG treatment with a Jordan chain for the zero mode.

struct BdgOptions {
  double degeneracy_tol = 1e-8;  // relative to max omega
  double zero_mode_tol = 1e-9;   // relative to max omega^2
  double gram_floor = 1e-12;
};

/// Canonical transformation of eta M0 with the zero mode split off as the (P, Q) pair.
/// Column order of `t`: (V0, W0, V1..V_{N-1}, W1..W_{N-1}).
struct BdgDecomposition {
  int n_sites = 0;
  Eigen::MatrixXd m0;
  Eigen::MatrixXcd t;
  Eigen::VectorXd frequencies;  // omega_1 <= ... <= omega_{N-1}
  Eigen::VectorXcd p;
  Eigen::VectorXcd q;
  double mu = 0.0;
  Eigen::MatrixXcd t_s;          // (V1..V_{N-1}, W1..W_{N-1})
  Eigen::MatrixXcd t_s_inverse;  // eta_S T_S^+ eta
  Eigen::MatrixXcd projector;    // T_S T_S^{-1}
  std::vector<int> sector_sizes;  // degenerate-sector sizes fed to the Gram canonicalization

  // diag(1, -1) + diag(I_{N-1}, -I_{N-1}), matching the column order of t.
  Eigen::MatrixXd eta_tilde() const;
  Eigen::MatrixXcd t_inverse() const;
};

/// Requires quad.h == 0. Throws DecompositionError for more than one zero mode or a
/// non-positive Gram matrix.
BdgDecomposition bdg_decompose(const QuadraticHamiltonian& quad, const BdgOptions& options = {});

/// <alpha alpha^+> = [[I + D*, E], [E*, D]] with D_ij = <a_i^+ a_j>, E_ij = <a_i a_j>.
struct ObcCovariance {
  Eigen::MatrixXcd matrix;

  int n_sites() const { return static_cast<int>(matrix.rows() / 2); }
  Eigen::MatrixXcd d() const { return matrix.bottomRightCorner(n_sites(), n_sites()); }
  Eigen::MatrixXcd e() const { return matrix.topRightCorner(n_sites(), n_sites()); }
  double n_fm() const { return d().trace().real(); }

  static ObcCovariance vacuum(int n_sites);
};

struct ObcTrajectory {
  std::vector<double> times;
  std::vector<ObcCovariance> states;
};

/// The covariance split used by the projector route: Pi C Pi^+ evolves, the rest is frozen.
struct ObcSplitCovariance {
  Eigen::MatrixXcd spin_wave;
  Eigen::MatrixXcd frozen;

  ObcCovariance total() const { return ObcCovariance{spin_wave + frozen}; }
};

ObcSplitCovariance split_covariance(const BdgDecomposition& decomp, const ObcCovariance& cov);

/// exp(-i tau K(h)) with K(h) = Pi eta (M0 + h I) Pi.
Eigen::MatrixXcd obc_segment_propagator(const BdgDecomposition& decomp, double h, double tau);

/// Projector route: the spin-wave part Pi C(0) Pi^+ evolves under K(h) = Pi eta M(h) Pi
/// with M(h) = M0 + h I; the remainder stays frozen. Throws NumericalError when the D block
/// of the evolved spin-wave part loses positivity beyond 1e-6.
ObcTrajectory evolve_obc_covariance(const BdgDecomposition& decomp, const ControlField& field,
                                    const std::vector<double>& times);

/// Same dynamics through the quasiparticle covariance <beta beta^+> = T^-1 C T^-+, evolving
/// only the spin-wave block with Omega_SS. Kept as an independent cross-check.
ObcTrajectory evolve_obc_covariance_beta(const BdgDecomposition& decomp, const ControlField& field,
                                         const std::vector<double>& times);

// ---------------------------------------------------------------------------

struct SpinWaveState {
  std::variant<PbcModeSet, ObcCovariance> representation;

  double n_fm() const;
  static SpinWaveState empty();  // no finite-frequency occupation
};

}  // namespace rsw
