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

#include "rsw/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "dopri.hpp"
#include "rsw/error.hpp"

namespace rsw {
namespace {

using cplx = std::complex<double>;
using Triplet = Eigen::Triplet<double>;

void check_pure_size(int n) {
  if (n < 1 || n > kMaxPureSpins) {
    throw std::invalid_argument("exact oracle supports 1 to " + std::to_string(kMaxPureSpins) +
                                " spins, got " + std::to_string(n));
  }
}

void check_density_size(int n) {
  if (n < 1 || n > kMaxDensitySpins) {
    throw std::invalid_argument("density-matrix oracle supports 1 to " +
                                std::to_string(kMaxDensitySpins) + " spins, got " +
                                std::to_string(n));
  }
}

// Real and imaginary parts go through the real sparse product separately.
Eigen::VectorXcd sparse_apply(const SparseOperator& op, const Eigen::VectorXcd& v) {
  Eigen::VectorXd re = op * v.real();
  Eigen::VectorXd im = op * v.imag();
  Eigen::VectorXcd out(v.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

Eigen::MatrixXcd sparse_apply(const SparseOperator& op, const Eigen::MatrixXcd& m) {
  Eigen::MatrixXd re = op * m.real();
  Eigen::MatrixXd im = op * m.imag();
  Eigen::MatrixXcd out(m.rows(), m.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

// out = S_axis in, column by column, for N spins; the three components by bit flips.
void apply_spin(int axis, int n, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  out.setZero(in.rows(), in.cols());
  for (Eigen::Index b = 0; b < dim; ++b) {
    if (axis == 2) {
      const double sz = 0.5 * n - std::popcount(static_cast<std::uint64_t>(b));
      out.row(b) = sz * in.row(b);
      continue;
    }
    for (int i = 0; i < n; ++i) {
      const Eigen::Index src = b ^ (Eigen::Index{1} << i);
      if (axis == 0) {
        out.row(b) += 0.5 * in.row(src);
      } else {
        // sigma^y |up> = i |down>, sigma^y |down> = -i |up>
        const cplx c = ((b >> i) & 1) ? cplx(0.0, 0.5) : cplx(0.0, -0.5);
        out.row(b) += c * in.row(src);
      }
    }
  }
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double expectation(const SparseOperator& op, const ManyBodyState& s) {
  if (s.is_pure()) return s.vector().dot(sparse_apply(op, s.vector())).real();
  return sparse_apply(op, s.density()).trace().real();
}

}  // namespace

ManyBodyState ManyBodyState::pure(int n_spins, Eigen::VectorXcd amplitudes) {
  check_pure_size(n_spins);
  if (amplitudes.size() != (Eigen::Index{1} << n_spins)) {
    throw std::invalid_argument("state vector length must be 2^N");
  }
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state vector must be normalized");
  }
  return ManyBodyState(n_spins, std::move(amplitudes));
}

ManyBodyState ManyBodyState::mixed(int n_spins, Eigen::MatrixXcd density) {
  check_density_size(n_spins);
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  if (density.rows() != dim || density.cols() != dim) {
    throw std::invalid_argument("density matrix must be 2^N x 2^N");
  }
  if (std::abs(density.trace().real() - 1.0) > 1e-8) {
    throw std::invalid_argument("density matrix must have unit trace");
  }
  return ManyBodyState(n_spins, std::move(density));
}

ManyBodyState ManyBodyState::to_density() const {
  if (!is_pure()) return *this;
  return mixed(n_spins_, vector() * vector().adjoint());
}

XXModel::XXModel(const CouplingMatrix& couplings) : n_spins_(couplings.n_sites()) {
  check_pure_size(n_spins_);
  const Eigen::Index dim = Eigen::Index{1} << n_spins_;
  std::vector<Triplet> xx;
  std::vector<Triplet> sx;
  xx.reserve(static_cast<std::size_t>(dim) * n_spins_ * (n_spins_ - 1) / 4 + 1);
  sx.reserve(static_cast<std::size_t>(dim) * n_spins_);
  for (Eigen::Index b = 0; b < dim; ++b) {
    for (int i = 0; i < n_spins_; ++i) {
      sx.emplace_back(b, b ^ (Eigen::Index{1} << i), 0.5);
      for (int j = i + 1; j < n_spins_; ++j) {
        // SxSx + SySy = (S+S- + S-S+)/2 only connects anti-aligned pairs.
        if (((b >> i) & 1) == ((b >> j) & 1)) continue;
        const Eigen::Index flipped = b ^ (Eigen::Index{1} << i) ^ (Eigen::Index{1} << j);
        xx.emplace_back(b, flipped, -0.5 * couplings(i, j));
      }
    }
  }
  interaction_.resize(dim, dim);
  interaction_.setFromTriplets(xx.begin(), xx.end());
  sx_total_.resize(dim, dim);
  sx_total_.setFromTriplets(sx.begin(), sx.end());
}

SparseOperator XXModel::hamiltonian(double h) const {
  SparseOperator out = interaction_ - h * sx_total_;
  out.prune(0.0);
  return out;
}

SparseOperator build_hamiltonian(const CouplingMatrix& couplings, double h) {
  return XXModel(couplings).hamiltonian(h);
}

SparseOperator collective_operator(int n_spins, int axis) {
  check_pure_size(n_spins);
  if (axis < 0 || axis > 2) throw std::invalid_argument("spin axis must be 0, 1 or 2");
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  std::vector<Triplet> t;
  for (Eigen::Index b = 0; b < dim; ++b) {
    if (axis == 2) {
      t.emplace_back(b, b, 0.5 * n_spins - std::popcount(static_cast<std::uint64_t>(b)));
      continue;
    }
    for (int i = 0; i < n_spins; ++i) {
      const Eigen::Index src = b ^ (Eigen::Index{1} << i);
      const double v = axis == 0 ? 0.5 : (((b >> i) & 1) ? 0.5 : -0.5);
      t.emplace_back(b, src, v);
    }
  }
  SparseOperator out(dim, dim);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

ManyBodyState embed_dicke(const RotorState& rotor, int n_spins) {
  if (rotor.n_spins() != n_spins) throw std::invalid_argument("rotor size does not match N");
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  // Rotor index k has m = k - N/2, i.e. k spins up.
  Eigen::VectorXi up(dim);
  Eigen::VectorXd weight(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    up(b) = n_spins - std::popcount(static_cast<std::uint64_t>(b));
    weight(b) = std::exp(-0.5 * log_binomial(n_spins, up(b)));
  }
  if (rotor.kind() == RotorState::Kind::PureVector) {
    check_pure_size(n_spins);
    Eigen::VectorXcd psi(dim);
    for (Eigen::Index b = 0; b < dim; ++b) psi(b) = weight(b) * rotor.vector()(up(b));
    return ManyBodyState::pure(n_spins, std::move(psi));
  }
  check_density_size(n_spins);
  Eigen::MatrixXcd rho(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      rho(a, b) = weight(a) * weight(b) * rotor.density()(up(a), up(b));
    }
  }
  return ManyBodyState::mixed(n_spins, std::move(rho));
}

ManyBodyState product_css_x(int n_spins) {
  check_pure_size(n_spins);
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, std::pow(2.0, -0.5 * n_spins));
  return ManyBodyState::pure(n_spins, std::move(psi));
}

SpinMoments many_body_moments(const ManyBodyState& state) {
  const int n = state.n_spins();
  SpinMoments out;
  if (state.is_pure()) {
    const Eigen::MatrixXcd psi = state.vector();
    Eigen::MatrixXcd s[3];
    for (int a = 0; a < 3; ++a) apply_spin(a, n, psi, s[a]);
    for (int a = 0; a < 3; ++a) {
      out.mean(a) = psi.col(0).dot(s[a].col(0)).real();
      for (int b = a; b < 3; ++b) {
        // <{S_a, S_b}>/2 = Re <S_a psi | S_b psi>
        out.second(a, b) = out.second(b, a) = s[a].col(0).dot(s[b].col(0)).real();
      }
    }
    return out;
  }
  const Eigen::MatrixXcd& rho = state.density();
  Eigen::MatrixXcd s[3];
  for (int a = 0; a < 3; ++a) apply_spin(a, n, rho, s[a]);
  Eigen::MatrixXcd tmp;
  for (int a = 0; a < 3; ++a) {
    out.mean(a) = s[a].trace().real();
    for (int b = a; b < 3; ++b) {
      apply_spin(a, n, s[b], tmp);
      out.second(a, b) = out.second(b, a) = tmp.trace().real();
    }
  }
  return out;
}

Eigen::VectorXcd krylov_expm(const SparseOperator& ham, const Eigen::VectorXcd& v, double tau,
                             const KrylovOptions& options) {
  if (tau == 0.0) return v;
  if (!(tau > 0.0)) throw std::invalid_argument("Krylov step must be non-negative");
  const Eigen::Index dim = v.size();
  const int m_max = static_cast<int>(std::min<Eigen::Index>(options.max_dimension, dim));
  Eigen::VectorXcd w = v;
  double remaining = tau;
  double step = tau;
  Eigen::MatrixXcd basis(dim, m_max);
  while (remaining > 0.0) {
    const double norm0 = w.norm();
    if (norm0 == 0.0) return w;
    basis.col(0) = w / norm0;
    Eigen::VectorXd alpha(m_max);
    Eigen::VectorXd beta(m_max);
    int m = 0;
    bool invariant = false;
    double trial = std::min(step, remaining);
    Eigen::VectorXcd coeffs;
    double residual = 0.0;

    // Grow the subspace until the residual estimate for the trial step is met.
    for (int j = 0; j < m_max; ++j) {
      Eigen::VectorXcd r = sparse_apply(ham, Eigen::VectorXcd(basis.col(j)));
      alpha(j) = basis.col(j).dot(r).real();
      r -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * r);
      r -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * r);
      beta(j) = r.norm();
      m = j + 1;
      if (beta(j) <= 1e-13 * (std::abs(alpha(j)) + 1.0)) {
        invariant = true;
        break;
      }
      if (j + 1 < m_max) basis.col(j + 1) = r / beta(j);
      if (m >= 4 || j + 1 == m_max) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(alpha.head(m), beta.head(m - 1));
        const Eigen::VectorXcd ph =
            (es.eigenvalues().cast<cplx>() * cplx(0.0, -trial)).array().exp().matrix();
        const Eigen::VectorXcd y =
            es.eigenvectors().cast<cplx>() *
            ph.cwiseProduct(es.eigenvectors().row(0).transpose().cast<cplx>());
        residual = beta(j) * std::abs(y(m - 1)) * norm0;
        if (residual <= options.tolerance * trial / tau * norm0) break;
      }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (m == 1) {
      es.compute(Eigen::MatrixXd::Constant(1, 1, alpha(0)));
    } else {
      es.computeFromTridiagonal(alpha.head(m), beta.head(m - 1));
    }
    auto coefficients = [&](double dt) {
      const Eigen::VectorXcd ph =
          (es.eigenvalues().cast<cplx>() * cplx(0.0, -dt)).array().exp().matrix();
      return Eigen::VectorXcd(es.eigenvectors().cast<cplx>() *
                              ph.cwiseProduct(es.eigenvectors().row(0).transpose().cast<cplx>()));
    };
    // Shrink the step until the a-posteriori residual meets the tolerance.
    while (true) {
      coeffs = coefficients(trial);
      if (invariant) break;
      residual = beta(m - 1) * std::abs(coeffs(m - 1)) * norm0;
      if (residual <= options.tolerance * trial / tau * norm0) break;
      trial *= 0.5;
      if (trial < 1e-14 * tau) {
        throw NumericalError("Krylov propagation failed to converge (step underflow)");
      }
    }
    w = norm0 * (basis.leftCols(m) * coeffs);
    remaining -= trial;
    if (remaining < 1e-15 * tau) remaining = 0.0;
    step = invariant ? remaining : trial * 1.5;
  }
  return w;
}

OracleTrajectory evolve_krylov(const ManyBodyState& state, const CouplingMatrix& couplings,
                               const ControlField& field, const std::vector<double>& times,
                               const KrylovOptions& options) {
  if (!state.is_pure()) throw std::invalid_argument("Krylov evolution needs a pure state");
  if (state.n_spins() != couplings.n_sites()) throw std::invalid_argument("state size mismatch");
  field.validate();
  const XXModel model(couplings);
  OracleTrajectory out;
  Eigen::VectorXcd psi = state.vector();
  double current_h = field.segments.front();
  SparseOperator ham = model.hamiltonian(current_h);
  walk_field(
      field, times,
      [&](double h, double dt) {
        if (h != current_h) {
          current_h = h;
          ham = model.hamiltonian(h);
        }
        psi = krylov_expm(ham, psi, dt, options);
      },
      [&](std::size_t idx) {
        const ManyBodyState s = ManyBodyState::pure(state.n_spins(), psi);
        out.times.push_back(times[idx]);
        out.moments.push_back(many_body_moments(s));
        out.energies.push_back(psi.dot(sparse_apply(model.hamiltonian(field.value_at(times[idx])), psi)).real());
      });
  out.final_state = ManyBodyState::pure(state.n_spins(), psi);
  return out;
}

OracleTrajectory evolve_lindblad_full(const ManyBodyState& state, const CouplingMatrix& couplings,
                                      const ControlField& field, double gamma,
                                      const std::vector<double>& times, Dephasing kind,
                                      const LindbladTolerances& tol) {
  const int n = state.n_spins();
  check_density_size(n);
  if (n != couplings.n_sites()) throw std::invalid_argument("state size mismatch");
  if (!(gamma >= 0.0)) throw std::invalid_argument("dephasing rate must be >= 0");
  field.validate();
  const XXModel model(couplings);
  const Eigen::Index dim = Eigen::Index{1} << n;

  // Both dissipators are diagonal in the computational basis and act elementwise.
  Eigen::MatrixXd damping(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      double w;
      if (kind == Dephasing::Collective) {
        const double dm = std::popcount(static_cast<std::uint64_t>(b)) -
                          std::popcount(static_cast<std::uint64_t>(a));
        w = dm * dm;
      } else {
        w = std::popcount(static_cast<std::uint64_t>(a ^ b));
      }
      damping(a, b) = -0.5 * gamma * w;
    }
  }

  OracleTrajectory out;
  Eigen::MatrixXcd rho = state.to_density().density();
  double dt = 1e-3;
  const cplx minus_i(0.0, -1.0);
  walk_field(
      field, times,
      [&](double h, double span) {
        const SparseOperator ham = model.hamiltonian(h);
        auto rhs = [&](const auto& x, auto& rate) {
          const Eigen::MatrixXcd hx = sparse_apply(ham, Eigen::MatrixXcd(x));
          rate = minus_i * (hx - hx.adjoint());
          rate.array() += damping.array() * x.array();
        };
        detail::integrate_matrix(rhs, rho, 0.0, span, dt, tol.rtol, tol.atol, [](auto& x) {
          const Eigen::MatrixXcd sym = 0.5 * (x + x.adjoint());
          x = sym;
        });
      },
      [&](std::size_t idx) {
        const ManyBodyState s = ManyBodyState::mixed(n, rho);
        out.times.push_back(times[idx]);
        out.moments.push_back(many_body_moments(s));
        out.energies.push_back(expectation(model.hamiltonian(field.value_at(times[idx])), s));
      });
  out.final_state = ManyBodyState::mixed(n, rho);
  return out;
}

namespace {

// Moments flattened to 9 numbers: mean (3) then the upper triangle of the second
// moments (6). Everything the estimators need is linear in these.
using MomentVector = Eigen::Matrix<double, 9, 1>;

MomentVector flatten(const SpinMoments& m) {
  MomentVector v;
  v << m.mean(0), m.mean(1), m.mean(2), m.second(0, 0), m.second(0, 1), m.second(0, 2),
      m.second(1, 1), m.second(1, 2), m.second(2, 2);
  return v;
}

SpinMoments unflatten(const MomentVector& v) {
  SpinMoments m;
  m.mean << v(0), v(1), v(2);
  m.second << v(3), v(4), v(5), v(4), v(6), v(7), v(5), v(7), v(8);
  return m;
}

// Jackknife mean and standard error of f over leave-one-out averages.
template <class F>
std::pair<double, double> jackknife(const std::vector<MomentVector>& samples, const MomentVector& sum,
                                    F&& f) {
  const double n = static_cast<double>(samples.size());
  const double full = f(unflatten(sum / n));
  if (samples.size() < 2) return {full, 0.0};
  std::vector<double> loo(samples.size());
  double loo_mean = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    loo[k] = f(unflatten((sum - samples[k]) / (n - 1.0)));
    loo_mean += loo[k];
  }
  loo_mean /= n;
  double var = 0.0;
  for (double x : loo) var += (x - loo_mean) * (x - loo_mean);
  return {full, std::sqrt((n - 1.0) / n * var)};
}

}  // namespace

McwfResult evolve_mcwf_individual(const ManyBodyState& state, const CouplingMatrix& couplings,
                                  const ControlField& field, double gamma_phi, int n_trajectories,
                                  std::uint64_t seed, const std::vector<double>& times,
                                  const KrylovOptions& options) {
  if (!state.is_pure()) throw std::invalid_argument("trajectory method needs a pure initial state");
  const int n = state.n_spins();
  if (n != couplings.n_sites()) throw std::invalid_argument("state size mismatch");
  if (n_trajectories < 1) throw std::invalid_argument("need at least one trajectory");
  if (!(gamma_phi >= 0.0)) throw std::invalid_argument("dephasing rate must be >= 0");
  field.validate();
  const XXModel model(couplings);
  std::vector<SparseOperator> hams;
  for (double h : field.segments) hams.push_back(model.hamiltonian(h));

  // sum_i L_i^dag L_i = gamma N / 4 is a multiple of the identity, so the no-jump decay
  // is deterministic and the waiting times are exactly exponential.
  const double jump_rate = gamma_phi * n / 4.0;
  const std::size_t n_times = times.size();
  std::vector<std::vector<MomentVector>> per_time(n_times,
                                                  std::vector<MomentVector>(n_trajectories));

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n_trajectories; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::exponential_distribution<double> wait(jump_rate > 0.0 ? jump_rate : 1.0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    Eigen::VectorXcd psi = state.vector();
    double until_jump = jump_rate > 0.0 ? wait(rng) : HUGE_VAL;
    double t = 0.0;
    auto jump = [&] {
      const int site = pick(rng);
      for (Eigen::Index b = 0; b < psi.size(); ++b) {
        if ((b >> site) & 1) psi(b) = -psi(b);
      }
    };
    auto run = [&](int seg, double span) {
      while (span > 0.0) {
        const double dt = std::min(span, until_jump);
        psi = krylov_expm(hams[seg], psi, dt, options);
        psi.normalize();
        span -= dt;
        until_jump -= dt;
        if (until_jump <= 0.0) {
          jump();
          until_jump = wait(rng);
        }
      }
    };
    walk_field(
        field, times,
        [&](double, double span) {
          // walk_field hands segments in order; recover the index from the clock.
          run(field.segment_at(t + 0.5 * span), span);
          t += span;
        },
        [&](std::size_t idx) {
          per_time[idx][k] = flatten(many_body_moments(ManyBodyState::pure(n, psi)));
        });
  }

  McwfResult result;
  result.n_trajectories = n_trajectories;
  for (std::size_t i = 0; i < n_times; ++i) {
    const auto& samples = per_time[i];
    MomentVector sum = MomentVector::Zero();
    for (const auto& s : samples) sum += s;
    McwfPoint p;
    p.t = times[i];
    p.moments = unflatten(sum / n_trajectories);
    std::tie(p.xi_squared, p.xi_squared_se) = jackknife(
        samples, sum, [n](const SpinMoments& m) { return squeezing_exact(m, n).xi_squared; });
    std::tie(p.mean_spin, p.mean_spin_se) =
        jackknife(samples, sum, [](const SpinMoments& m) { return m.mean.norm(); });
    std::tie(p.s_squared, p.s_squared_se) =
        jackknife(samples, sum, [](const SpinMoments& m) { return m.total_spin_squared(); });
    for (int a = 0; a < 3; ++a) {
      std::tie(std::ignore, p.mean_se(a)) =
          jackknife(samples, sum, [a](const SpinMoments& m) { return m.mean(a); });
    }
    result.points.push_back(p);
  }
  return result;
}

}  // namespace rsw
