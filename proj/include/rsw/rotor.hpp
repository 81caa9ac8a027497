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
#include <map>
#include <memory>
#include <shared_mutex>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rsw/control_field.hpp"
#include "rsw/lattice.hpp"

namespace rsw {

/// Collective spin components in the J = N/2 Dicke subspace, basis ordered
/// m = -N/2, ..., N/2. Kx and Kz are real; Ky is purely imaginary.
struct DickeOperators {
  int n_spins = 0;
  Eigen::VectorXd m;
  Eigen::MatrixXd kx;
  Eigen::MatrixXcd ky;
  Eigen::MatrixXd kz;

  int dimension() const { return n_spins + 1; }
  double total_spin() const { return 0.5 * n_spins; }
  // Ky^2 is real symmetric.
  Eigen::MatrixXd ky_squared() const;
};

DickeOperators build_dicke_operators(int n_spins);

class RotorState {
 public:
  enum class Kind { PureVector, DensityMatrix };

  static RotorState pure(Eigen::VectorXcd amplitudes);
  static RotorState mixed(Eigen::MatrixXcd density);

  Kind kind() const { return std::holds_alternative<Eigen::VectorXcd>(data_) ? Kind::PureVector : Kind::DensityMatrix; }
  int dimension() const;
  int n_spins() const { return dimension() - 1; }
  const Eigen::VectorXcd& vector() const { return std::get<Eigen::VectorXcd>(data_); }
  const Eigen::MatrixXcd& density() const { return std::get<Eigen::MatrixXcd>(data_); }
  RotorState to_density() const;

  // <O>; O need not be Hermitian.
  std::complex<double> expectation(const Eigen::MatrixXcd& op) const;
  std::complex<double> expectation(const Eigen::MatrixXd& op) const;
  // |<a|b>|^2 for pure states, Tr(rho_a rho_b) otherwise.
  double overlap(const RotorState& other) const;

 private:
  explicit RotorState(std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data) : data_(std::move(data)) {}
  std::variant<Eigen::VectorXcd, Eigen::MatrixXcd> data_;
};

/// Binomial coherent state polarized along +x.
RotorState initial_css_x(int n_spins);

struct RotorHamiltonian {
  enum class Kind { OAT, TAT };
  double chi = 0.0;
  Kind kind = Kind::OAT;
};

/// Rotor twisting strength 1/(2I) = sum_{i<j} J_ij / (N (N - 1)), from projecting
/// the XX Hamiltonian onto the maximal-spin sector. Equals J_0 / (2 (N - 1)) for
/// translation-invariant lattices.
double inverse_inertia(const CouplingMatrix& couplings);

/// Exact piecewise propagation for H(h) = H_twist - h Kx. Eigendecompositions are
/// cached per field value; concurrent use from several threads is safe.
class RotorPropagator {
 public:
  RotorPropagator(int n_spins, RotorHamiltonian ham);

  const DickeOperators& operators() const { return ops_; }
  const RotorHamiltonian& hamiltonian_spec() const { return ham_; }
  Eigen::MatrixXd hamiltonian(double h) const;

  void apply(Eigen::VectorXcd& psi, double h, double dt) const;
  void apply(Eigen::MatrixXcd& rho, double h, double dt) const;

  std::size_t cache_size() const;

 private:
  struct Spectrum {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
  };
  std::shared_ptr<const Spectrum> spectrum(double h) const;

  DickeOperators ops_;
  RotorHamiltonian ham_;
  Eigen::MatrixXd twist_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::uint64_t, std::shared_ptr<const Spectrum>> cache_;
};

struct RotorTrajectory {
  std::vector<double> times;
  std::vector<RotorState> states;
};

RotorTrajectory evolve_unitary(const RotorState& state, const RotorPropagator& propagator,
                               const ControlField& field, const std::vector<double>& times);
RotorTrajectory evolve_unitary(const RotorState& state, const RotorHamiltonian& ham,
                               const ControlField& field, const std::vector<double>& times);

struct LindbladTolerances {
  double rtol = 1e-8;
  double atol = 1e-10;
};

/// d rho/dt = -i[H, rho] + gamma_c (Kz rho Kz - {Kz^2, rho}/2), integrated with an
/// adaptive Dormand-Prince 5(4) pair. Pure inputs are promoted to density matrices.
/// One constant-field stretch of the collective-dephasing master equation. The result
/// depends only on the arguments: the step-size guess restarts at the stretch length.
void lindblad_collective_segment(Eigen::MatrixXcd& rho, const RotorPropagator& propagator,
                                 double gamma_c, double h, double span,
                                 const LindbladTolerances& tol = {});
RotorTrajectory evolve_lindblad_collective(const RotorState& state, const RotorPropagator& propagator,
                                           const ControlField& field, double gamma_c,
                                           const std::vector<double>& times,
                                           const LindbladTolerances& tol = {});
RotorTrajectory evolve_lindblad_collective(const RotorState& state, const RotorHamiltonian& ham,
                                           const ControlField& field, double gamma_c,
                                           const std::vector<double>& times,
                                           const LindbladTolerances& tol = {});

struct TatBenchmark {
  double xi_squared_min = 1.0;
  double time_at_min = 0.0;
};

/// Evolves CSS_x under chi (Kz^2 - Ky^2) and returns the minimal xi^2 on t_grid.
TatBenchmark tat_benchmark(int n_spins, double chi, const std::vector<double>& t_grid);

}  // namespace rsw
