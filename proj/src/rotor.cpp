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

#include "rsw/rotor.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include <Eigen/Sparse>

#include "dopri.hpp"
#include "rsw/error.hpp"
#include "rsw/observables.hpp"

namespace rsw {

namespace {

constexpr std::size_t kMaxCachedSpectra = 4096;

void check_dimension(const RotorState& state, int dimension) {
  if (state.dimension() != dimension) {
    throw std::invalid_argument("rotor state dimension " + std::to_string(state.dimension()) +
                                " does not match " + std::to_string(dimension));
  }
}

}  // namespace

Eigen::MatrixXd DickeOperators::ky_squared() const { return (ky * ky).real(); }

DickeOperators build_dicke_operators(int n_spins) {
  if (n_spins < 1) throw std::invalid_argument("Dicke operators need n_spins >= 1");
  const int dim = n_spins + 1;
  const double j = 0.5 * n_spins;
  DickeOperators ops;
  ops.n_spins = n_spins;
  ops.m.resize(dim);
  for (int k = 0; k < dim; ++k) ops.m(k) = -j + k;
  ops.kz = ops.m.asDiagonal();

  // <m+1|K+|m> = sqrt(j(j+1) - m(m+1))
  Eigen::MatrixXd raise = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) {
    const double m = ops.m(k);
    raise(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Eigen::MatrixXd lower = raise.transpose();
  ops.kx = 0.5 * (raise + lower);
  ops.ky = (raise - lower).cast<std::complex<double>>() / std::complex<double>(0.0, 2.0);
  return ops;
}

RotorState RotorState::pure(Eigen::VectorXcd amplitudes) {
  if (amplitudes.size() < 2) throw std::invalid_argument("rotor state needs at least two levels");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-8) throw std::invalid_argument("rotor state must be normalized");
  return RotorState(std::move(amplitudes));
}

RotorState RotorState::mixed(Eigen::MatrixXcd density) {
  if (density.rows() != density.cols()) throw std::invalid_argument("density matrix must be square");
  if (density.rows() < 2) throw std::invalid_argument("rotor state needs at least two levels");
  if (std::abs(density.trace().real() - 1.0) > 1e-6) throw std::invalid_argument("density matrix must have unit trace");
  return RotorState(std::move(density));
}

int RotorState::dimension() const {
  return kind() == Kind::PureVector ? static_cast<int>(vector().size())
                                    : static_cast<int>(density().rows());
}

RotorState RotorState::to_density() const {
  if (kind() == Kind::DensityMatrix) return *this;
  return mixed(vector() * vector().adjoint());
}

std::complex<double> RotorState::expectation(const Eigen::MatrixXcd& op) const {
  if (kind() == Kind::PureVector) return vector().dot(op * vector());
  return (op * density()).trace();
}

std::complex<double> RotorState::expectation(const Eigen::MatrixXd& op) const {
  if (kind() == Kind::PureVector) return vector().dot(op * vector());
  return (op * density()).trace();
}

double RotorState::overlap(const RotorState& other) const {
  if (kind() == Kind::PureVector && other.kind() == Kind::PureVector) {
    return std::norm(vector().dot(other.vector()));
  }
  return (to_density().density() * other.to_density().density()).trace().real();
}

RotorState initial_css_x(int n_spins) {
  if (n_spins < 1) throw std::invalid_argument("CSS needs n_spins >= 1");
  // c_m = 2^{-N/2} sqrt(C(N, N/2 + m)), accumulated in log space to stay finite for large N.
  Eigen::VectorXcd amps(n_spins + 1);
  for (int k = 0; k <= n_spins; ++k) {
    const double log_binom = std::lgamma(n_spins + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n_spins - k + 1.0);
    amps(k) = std::exp(0.5 * log_binom - 0.5 * n_spins * std::log(2.0));
  }
  amps.normalize();
  return RotorState::pure(std::move(amps));
}

double inverse_inertia(const CouplingMatrix& couplings) {
  const double n = couplings.n_sites();
  return couplings.pair_sum() / (n * (n - 1.0));
}

RotorPropagator::RotorPropagator(int n_spins, RotorHamiltonian ham)
    : ops_(build_dicke_operators(n_spins)), ham_(ham) {
  if (!std::isfinite(ham.chi)) throw std::invalid_argument("rotor chi must be finite");
  const Eigen::MatrixXd kz2 = ops_.kz * ops_.kz;
  twist_ = ham.kind == RotorHamiltonian::Kind::OAT ? Eigen::MatrixXd(ham.chi * kz2)
                                                   : Eigen::MatrixXd(ham.chi * (kz2 - ops_.ky_squared()));
}

Eigen::MatrixXd RotorPropagator::hamiltonian(double h) const { return twist_ - h * ops_.kx; }

std::shared_ptr<const RotorPropagator::Spectrum> RotorPropagator::spectrum(double h) const {
  const auto key = std::bit_cast<std::uint64_t>(h);
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian(h));
  auto spec = std::make_shared<const Spectrum>(Spectrum{solver.eigenvalues(), solver.eigenvectors()});
  std::unique_lock lock(mutex_);
  if (cache_.size() >= kMaxCachedSpectra) cache_.clear();
  return cache_.emplace(key, std::move(spec)).first->second;
}

std::size_t RotorPropagator::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

void RotorPropagator::apply(Eigen::VectorXcd& psi, double h, double dt) const {
  if (!std::isfinite(h)) throw std::invalid_argument("non-finite field value");
  const auto spec = spectrum(h);
  Eigen::VectorXcd coeffs = spec->vectors.transpose() * psi;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::polar(1.0, -spec->energies(k) * dt);
  }
  psi = spec->vectors * coeffs;
}

void RotorPropagator::apply(Eigen::MatrixXcd& rho, double h, double dt) const {
  if (!std::isfinite(h)) throw std::invalid_argument("non-finite field value");
  const auto spec = spectrum(h);
  Eigen::VectorXcd phases(spec->energies.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, -spec->energies(k) * dt);
  const Eigen::MatrixXcd u = spec->vectors * phases.asDiagonal() * spec->vectors.transpose();
  rho = u * rho * u.adjoint();
}

RotorTrajectory evolve_unitary(const RotorState& state, const RotorPropagator& propagator,
                               const ControlField& field, const std::vector<double>& times) {
  field.validate();
  check_dimension(state, propagator.operators().dimension());
  RotorTrajectory out;
  out.times = times;
  out.states.reserve(times.size());
  if (state.kind() == RotorState::Kind::PureVector) {
    Eigen::VectorXcd psi = state.vector();
    walk_field(
        field, times, [&](double h, double dt) { propagator.apply(psi, h, dt); },
        [&](std::size_t) { out.states.push_back(RotorState::pure(psi)); });
  } else {
    Eigen::MatrixXcd rho = state.density();
    walk_field(
        field, times, [&](double h, double dt) { propagator.apply(rho, h, dt); },
        [&](std::size_t) { out.states.push_back(RotorState::mixed(rho)); });
  }
  return out;
}

RotorTrajectory evolve_unitary(const RotorState& state, const RotorHamiltonian& ham,
                               const ControlField& field, const std::vector<double>& times) {
  return evolve_unitary(state, RotorPropagator(state.n_spins(), ham), field, times);
}

void lindblad_collective_segment(Eigen::MatrixXcd& rho, const RotorPropagator& propagator,
                                 double gamma_c, double h, double span,
                                 const LindbladTolerances& tol) {
  if (!(gamma_c >= 0.0)) throw std::invalid_argument("collective dephasing rate must be >= 0");
  const DickeOperators& ops = propagator.operators();
  const Eigen::Index dim = ops.dimension();
  if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("density matrix size mismatch");

  // Kz rho Kz - {Kz^2, rho}/2 = -(m - m')^2 rho_{mm'} / 2 in the Kz basis.
  Eigen::MatrixXd damping(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const double dm = ops.m(a) - ops.m(b);
      damping(a, b) = -0.5 * gamma_c * dm * dm;
    }
  }
  // H is banded in the Dicke basis (tridiagonal for OAT); past a few dozen levels the
  // sparse product wins over the dense one.
  const Eigen::MatrixXcd dense = propagator.hamiltonian(h).cast<std::complex<double>>();
  const Eigen::SparseMatrix<std::complex<double>> sparse = dense.sparseView();
  const bool use_sparse = dim > 48;
  const std::complex<double> minus_i(0.0, -1.0);
  Eigen::MatrixXcd hx(dim, dim);
  auto rhs = [&](const auto& x, auto& rate) {
    if (use_sparse) {
      hx.noalias() = sparse * x;
    } else {
      hx.noalias() = dense * x;
    }
    rate = minus_i * (hx - hx.adjoint());
    rate.array() += damping.array() * x.array();
  };
  // hx.adjoint() equals x H only for Hermitian x; stage states stay Hermitian to
  // roundoff and the post-step symmetrization removes the residue.
  double dt = span;
  detail::integrate_matrix(rhs, rho, 0.0, span, dt, tol.rtol, tol.atol, [](auto& x) {
    const Eigen::MatrixXcd sym = 0.5 * (x + x.adjoint());
    x = sym;
  });
}

RotorTrajectory evolve_lindblad_collective(const RotorState& state, const RotorPropagator& propagator,
                                           const ControlField& field, double gamma_c,
                                           const std::vector<double>& times,
                                           const LindbladTolerances& tol) {
  if (!(gamma_c >= 0.0)) throw std::invalid_argument("collective dephasing rate must be >= 0");
  field.validate();
  check_dimension(state, propagator.operators().dimension());
  RotorTrajectory out;
  out.times = times;
  Eigen::MatrixXcd rho = state.to_density().density();
  walk_field(
      field, times,
      [&](double h, double span) {
        lindblad_collective_segment(rho, propagator, gamma_c, h, span, tol);
      },
      [&](std::size_t) { out.states.push_back(RotorState::mixed(rho)); });
  return out;
}

RotorTrajectory evolve_lindblad_collective(const RotorState& state, const RotorHamiltonian& ham,
                                           const ControlField& field, double gamma_c,
                                           const std::vector<double>& times,
                                           const LindbladTolerances& tol) {
  return evolve_lindblad_collective(state, RotorPropagator(state.n_spins(), ham), field, gamma_c,
                                    times, tol);
}

TatBenchmark tat_benchmark(int n_spins, double chi, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("TAT benchmark needs a non-empty time grid");
  if (!(chi > 0.0)) throw std::invalid_argument("TAT benchmark needs chi > 0");
  const RotorPropagator prop(n_spins, {chi, RotorHamiltonian::Kind::TAT});
  const RotorState css = initial_css_x(n_spins);
  TatBenchmark best{std::numeric_limits<double>::infinity(), 0.0};
  for (double t : t_grid) {
    Eigen::VectorXcd psi = css.vector();
    prop.apply(psi, 0.0, t);
    const SpinMoments mom = rotor_moments(RotorState::pure(psi), prop.operators());
    const double xi2 = squeezing_exact(mom, n_spins).xi_squared;
    if (xi2 < best.xi_squared_min) best = {xi2, t};
  }
  return best;
}

}  // namespace rsw
