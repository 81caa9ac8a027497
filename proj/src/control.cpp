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

#include "rsw/control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "rsw/error.hpp"

namespace rsw {

SpinWaveState RswState::spin_waves() const {
  if (const auto* modes = std::get_if<PbcModeSet>(&waves)) return SpinWaveState{*modes};
  return SpinWaveState{std::get<ObcSplitCovariance>(waves).total()};
}

RswProblem::RswProblem(const LatticeSpec& spec)
    : spec_(spec), couplings_(build_couplings(spec)), inverse_inertia_(rsw::inverse_inertia(couplings_)) {
  rotor_ = std::make_shared<RotorPropagator>(
      spec_.n_sites(), RotorHamiltonian{inverse_inertia_, RotorHamiltonian::Kind::OAT});
  if (spec_.boundary == Boundary::Periodic) {
    pbc_vacuum_ = pbc_vacuum(couplings_, spec_);
  } else {
    bdg_ = bdg_decompose(build_quadratic(couplings_, 0.0));
  }
}

RswState RswProblem::initial_state() const {
  RswState s;
  s.rotor = initial_css_x(n_spins());
  if (pbc_vacuum_) {
    s.waves = *pbc_vacuum_;
  } else {
    s.waves = split_covariance(*bdg_, ObcCovariance::vacuum(n_spins()));
  }
  return s;
}

void RswProblem::advance(RswState& state, double h, double dt, const Noise& noise) const {
  if (!(dt > 0.0)) return;
  switch (noise.kind) {
    case NoiseKind::None:
      if (state.rotor.kind() == RotorState::Kind::PureVector) {
        Eigen::VectorXcd psi = state.rotor.vector();
        rotor_->apply(psi, h, dt);
        state.rotor = RotorState::pure(std::move(psi));
      } else {
        Eigen::MatrixXcd rho = state.rotor.density();
        rotor_->apply(rho, h, dt);
        state.rotor = RotorState::mixed(std::move(rho));
      }
      break;
    case NoiseKind::Collective: {
      Eigen::MatrixXcd rho = state.rotor.to_density().density();
      lindblad_collective_segment(rho, *rotor_, noise.rate, h, dt);
      state.rotor = RotorState::mixed(std::move(rho));
      break;
    }
    case NoiseKind::Individual:
      throw std::invalid_argument(
          "the RSW pipeline models collective dephasing only; use the trajectory oracle for "
          "individual dephasing");
  }

  if (auto* modes = std::get_if<PbcModeSet>(&state.waves)) {
    *modes = evolve_pbc_modes(*modes, ControlField{dt, {h}}, {dt}).states.back();
  } else {
    auto& split = std::get<ObcSplitCovariance>(state.waves);
    const Eigen::MatrixXcd u = obc_segment_propagator(*bdg_, h, dt);
    split.spin_wave = u * split.spin_wave * u.adjoint();
  }
}

SqueezingResult RswProblem::squeezing(const RswState& state) const {
  return squeezing_from_rsw(state.rotor, state.spin_waves(), n_spins());
}

std::vector<TrajectoryPoint> rsw_trajectory(const RswProblem& problem, const ControlField& field,
                                            const Noise& noise, const std::vector<double>& times) {
  field.validate();
  RswState state = problem.initial_state();
  std::vector<TrajectoryPoint> out;
  out.reserve(times.size());
  const int n = problem.n_spins();
  walk_field(
      field, times, [&](double h, double dt) { problem.advance(state, h, dt, noise); },
      [&](std::size_t idx) {
        TrajectoryPoint p;
        p.t = times[idx];
        p.h = field.value_at(p.t);
        const SpinWaveState waves = state.spin_waves();
        p.n_fm = waves.n_fm();
        p.mean_spin = mean_spin_magnitude(state.rotor, waves, n);
        p.s_squared = total_spin_squared(state.rotor, waves, n).value;
        try {
          const SqueezingResult sq = squeezing_from_rsw(state.rotor, waves, n);
          p.xi_squared = sq.xi_squared;
          p.xi_db = sq.xi_db;
        } catch (const LostMeanSpinError&) {
          p.xi_squared = std::numeric_limits<double>::quiet_NaN();
          p.xi_db = std::numeric_limits<double>::quiet_NaN();
          p.valid = false;
        }
        out.push_back(p);
      });
  return out;
}

namespace {

double penalty_for(const RswProblem& problem, const RswState& state) {
  const DickeOperators& ops = problem.rotor().operators();
  const double kx = state.rotor.expectation(ops.kx).real();
  const double n_fm = state.spin_waves().n_fm();
  return kInfeasiblePenalty + std::max(0.0, (n_fm - kx) / problem.n_spins());
}

// Finishes a run from `state` at the start of segment `first` and scores it.
double finish(const RswProblem& problem, const ControlField& field, const Noise& noise,
              RswState state, int first, int perturbed = -1, double delta = 0.0) {
  const double dt = field.segment_duration();
  try {
    for (int k = first; k < field.n_segments(); ++k) {
      problem.advance(state, field.segments[k] + (k == perturbed ? delta : 0.0), dt, noise);
    }
    return problem.squeezing(state).xi_squared;
  } catch (const LostMeanSpinError&) {
    return penalty_for(problem, state);
  } catch (const NumericalError&) {
    return kInfeasiblePenalty + 1.0;
  }
}

}  // namespace

double objective(const ControlField& field, const RswProblem& problem, const Noise& noise) {
  field.validate();
  return finish(problem, field, noise, problem.initial_state(), 0);
}

std::vector<double> objective_gradient(const ControlField& field, const RswProblem& problem,
                                       const Noise& noise, double step, double* value) {
  field.validate();
  const int m = field.n_segments();
  const double dt = field.segment_duration();
  // States at the start of every segment; a failure part-way leaves later entries unset
  // and those segments restart from the beginning.
  std::vector<std::optional<RswState>> boundary(m);
  RswState state = problem.initial_state();
  try {
    for (int k = 0; k < m; ++k) {
      boundary[k] = state;
      problem.advance(state, field.segments[k], dt, noise);
    }
  } catch (const NumericalError&) {
  }
  if (value) *value = finish(problem, field, noise, problem.initial_state(), 0);

  std::vector<double> grad(m);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < m; ++k) {
    const RswState& start = boundary[k] ? *boundary[k] : *boundary[0];
    const int first = boundary[k] ? k : 0;
    const double up = finish(problem, field, noise, start, first, k, step);
    const double down = finish(problem, field, noise, start, first, k, -step);
    grad[k] = (up - down) / (2.0 * step);
  }
  return grad;
}

namespace {

struct StartOutcome {
  Eigen::VectorXd x;
  double f = 0.0;
  std::vector<double> history;
  double grad_norm = 0.0;
  int evaluations = 0;
  bool converged = false;
};

Eigen::VectorXd clip(Eigen::VectorXd x, double bound) {
  return x.cwiseMax(-bound).cwiseMin(bound);
}

// Projected gradient norm: components pushing out of the box at an active bound vanish.
double projected_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& g, double bound) {
  Eigen::VectorXd p = g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x(i) >= bound && g(i) < 0.0) || (x(i) <= -bound && g(i) > 0.0)) p(i) = 0.0;
  }
  return p.norm();
}

StartOutcome run_bfgs(Eigen::VectorXd x, const RswProblem& problem, const Noise& noise,
                      double total_time, const OptimizerOptions& opt) {
  const Eigen::Index m = x.size();
  auto as_field = [&](const Eigen::VectorXd& v) {
    return ControlField{total_time, std::vector<double>(v.data(), v.data() + v.size())};
  };
  auto eval_grad = [&](const Eigen::VectorXd& v, double& f) {
    const std::vector<double> g = objective_gradient(as_field(v), problem, noise, opt.fd_step, &f);
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(g.data(), m));
  };

  StartOutcome out;
  x = clip(std::move(x), opt.h_max);
  double f = 0.0;
  Eigen::VectorXd g = eval_grad(x, f);
  out.evaluations += 1 + 2 * static_cast<int>(m);
  if (!std::isfinite(f)) throw NumericalError("objective is not finite at the initial field");
  out.x = x;
  out.f = f;
  out.history.push_back(f);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(m, m);

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    out.grad_norm = projected_norm(x, g, opt.h_max);
    if (out.grad_norm < opt.gradient_tolerance) {
      out.converged = true;
      break;
    }
    Eigen::VectorXd dir = -hinv * g;
    if (g.dot(dir) >= 0.0) {
      hinv.setIdentity();
      dir = -g;
    }
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      x_new = clip(x + step * dir, opt.h_max);
      f_new = objective(as_field(x_new), problem, noise);
      ++out.evaluations;
      const double decrease = g.dot(x_new - x);
      if (std::isfinite(f_new) && f_new < f && f_new <= f + opt.armijo_c1 * decrease) {
        accepted = true;
        break;
      }
      step *= opt.backtrack;
    }
    if (!accepted) {
      // A failed search from a curvature-scaled direction gets one retry along -g.
      if (hinv.isIdentity()) break;
      hinv.setIdentity();
      continue;
    }
    double f_check = 0.0;
    const Eigen::VectorXd g_new = eval_grad(x_new, f_check);
    out.evaluations += 1 + 2 * static_cast<int>(m);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(m, m) - rho * s * y.transpose();
      hinv = left * hinv * left.transpose() + rho * s * s.transpose();
    }
    x = x_new;
    f = f_new;
    g = g_new;
    out.history.push_back(f);
    if (f < out.f) {
      out.x = x;
      out.f = f;
    }
  }
  out.grad_norm = projected_norm(x, g, opt.h_max);
  if (out.grad_norm < opt.gradient_tolerance) out.converged = true;
  return out;
}

}  // namespace

OptimizationResult optimize(const ControlField& initial, const RswProblem& problem,
                            const Noise& noise, const OptimizerOptions& options,
                            const CheckpointFn& checkpoint) {
  initial.validate(options.h_max);
  if (!(options.fd_step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  if (options.n_random_starts < 0) throw std::invalid_argument("random start count must be >= 0");
  const int m = initial.n_segments();

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::Map<const Eigen::VectorXd>(initial.segments.data(), m));
  if (options.include_zero_seed) starts.push_back(Eigen::VectorXd::Zero(m));
  if (options.include_constant_seed) starts.push_back(Eigen::VectorXd::Constant(m, options.constant_seed));
  for (int r = 0; r < options.n_random_starts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                      static_cast<std::uint32_t>(options.seed >> 32), static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> dist(-options.random_amplitude, options.random_amplitude);
    Eigen::VectorXd x(m);
    for (int k = 0; k < m; ++k) x(k) = dist(rng);
    starts.push_back(std::move(x));
  }

  OptimizationResult result;
  double best = HUGE_VAL;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    StartOutcome run;
    try {
      run = run_bfgs(starts[i], problem, noise, initial.total_time, options);
    } catch (const NumericalError&) {
      // A seed that starts on an undefined objective is dropped; the explicit initial
      // field is required to be well defined.
      if (i == 0) throw;
      result.start_objectives.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    result.n_evaluations += run.evaluations;
    result.start_objectives.push_back(run.f);
    if (run.f < best) {
      best = run.f;
      result.best_start = static_cast<int>(i);
      result.best_field = ControlField{initial.total_time,
                                       std::vector<double>(run.x.data(), run.x.data() + m)};
      result.objective_history = run.history;
      result.gradient_norm_final = run.grad_norm;
      result.converged = run.converged;
    }
    result.xi_squared_opt = best;
    result.xi_db_opt = -10.0 * std::log10(best);
    if (checkpoint) checkpoint(result);
  }
  return result;
}

std::pair<double, double> crossover_time_fit(const std::vector<double>& sizes,
                                             const std::vector<double>& t_values) {
  if (sizes.size() != t_values.size()) throw std::invalid_argument("fit inputs differ in length");
  if (sizes.size() < 2) throw std::invalid_argument("fit needs at least two points");
  const double n = static_cast<double>(sizes.size());
  const double mx = std::accumulate(sizes.begin(), sizes.end(), 0.0) / n;
  const double my = std::accumulate(t_values.begin(), t_values.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    sxx += (sizes[i] - mx) * (sizes[i] - mx);
    sxy += (sizes[i] - mx) * (t_values[i] - my);
  }
  if (sxx <= 1e-300) throw std::invalid_argument("fit needs at least two distinct sizes");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace rsw
