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

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rsw/control_field.hpp"
#include "rsw/lattice.hpp"
#include "rsw/many_body.hpp"
#include "rsw/observables.hpp"
#include "rsw/rotor.hpp"

namespace rsw {

using SparseOperator = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// The XX Hamiltonian split as H(h) = interaction - h Sx_total, both real in the
/// computational basis.
class XXModel {
 public:
  explicit XXModel(const CouplingMatrix& couplings);

  int n_spins() const { return n_spins_; }
  const SparseOperator& interaction() const { return interaction_; }
  const SparseOperator& sx_total() const { return sx_total_; }
  SparseOperator hamiltonian(double h) const;

 private:
  int n_spins_;
  SparseOperator interaction_;
  SparseOperator sx_total_;
};

/// H = -sum_{i<j} J_ij (S^x_i S^x_j + S^y_i S^y_j) - h sum_i S^x_i. Rejects N > 16.
SparseOperator build_hamiltonian(const CouplingMatrix& couplings, double h);

/// Sparse collective spin component (axis 0, 1, 2 = x, y, z). Sy is returned as its
/// imaginary part: Sy = i * imag_sy.
SparseOperator collective_operator(int n_spins, int axis);

ManyBodyState product_css_x(int n_spins);

/// |J = N/2, m> -> normalized symmetric sum of basis states with N/2 + m spins up.
ManyBodyState embed_dicke(const RotorState& rotor, int n_spins);

struct KrylovOptions {
  int max_dimension = 40;
  double tolerance = 1e-10;  // local error per unit of propagated time
};

/// exp(-i H tau) v by Lanczos with full reorthogonalization and adaptive substeps.
Eigen::VectorXcd krylov_expm(const SparseOperator& ham, const Eigen::VectorXcd& v, double tau,
                             const KrylovOptions& options = {});

struct OracleTrajectory {
  std::vector<double> times;
  std::vector<SpinMoments> moments;
  std::vector<double> energies;  // <H(h)> at each sample, h of the segment being sampled
  ManyBodyState final_state = ManyBodyState::pure(1, Eigen::VectorXcd::Unit(2, 0));
};

OracleTrajectory evolve_krylov(const ManyBodyState& state, const CouplingMatrix& couplings,
                               const ControlField& field, const std::vector<double>& times,
                               const KrylovOptions& options = {});

enum class Dephasing { Collective, Individual };

/// Full master equation with jump operators sqrt(gamma) S^z_total (Collective) or
/// sqrt(gamma) S^z_i on every site (Individual). Rejects N > 10.
OracleTrajectory evolve_lindblad_full(const ManyBodyState& state, const CouplingMatrix& couplings,
                                      const ControlField& field, double gamma,
                                      const std::vector<double>& times,
                                      Dephasing kind = Dephasing::Collective,
                                      const LindbladTolerances& tol = {});

struct McwfPoint {
  double t = 0.0;
  SpinMoments moments;  // trajectory-averaged
  double xi_squared = 0.0;
  double xi_squared_se = 0.0;
  double mean_spin = 0.0;
  double mean_spin_se = 0.0;
  double s_squared = 0.0;
  double s_squared_se = 0.0;
  Eigen::Vector3d mean_se = Eigen::Vector3d::Zero();
};

struct McwfResult {
  int n_trajectories = 0;
  std::vector<McwfPoint> points;
};

/// Quantum-trajectory unraveling of individual dephasing (jumps sqrt(gamma_phi) S^z_i).
/// Trajectory k draws from a generator seeded with (seed, k), so results do not depend
/// on scheduling. Standard errors of nonlinear quantities come from the jackknife.
McwfResult evolve_mcwf_individual(const ManyBodyState& state, const CouplingMatrix& couplings,
                                  const ControlField& field, double gamma_phi, int n_trajectories,
                                  std::uint64_t seed, const std::vector<double>& times,
                                  const KrylovOptions& options = {});

}  // namespace rsw
