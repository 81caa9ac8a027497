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
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "rsw/control_field.hpp"
#include "rsw/lattice.hpp"
#include "rsw/observables.hpp"
#include "rsw/rotor.hpp"
#include "rsw/spinwave.hpp"

namespace rsw {

enum class NoiseKind { None, Collective, Individual };

struct Noise {
  NoiseKind kind = NoiseKind::None;
  double rate = 0.0;  // gamma_c or gamma_phi, units of J

  static Noise none() { return {}; }
  static Noise collective(double gamma) { return {NoiseKind::Collective, gamma}; }
  static Noise individual(double gamma) { return {NoiseKind::Individual, gamma}; }
};

/// Rotor plus spin-wave state carried through a run.
struct RswState {
  RotorState rotor = RotorState::pure(Eigen::VectorXcd::Unit(2, 0));
  std::variant<PbcModeSet, ObcSplitCovariance> waves;

  SpinWaveState spin_waves() const;
};

/// Everything the RSW pipeline needs for one lattice, built once and shared.
class RswProblem {
 public:
  explicit RswProblem(const LatticeSpec& spec);

  const LatticeSpec& spec() const { return spec_; }
  const CouplingMatrix& couplings() const { return couplings_; }
  int n_spins() const { return spec_.n_sites(); }
  double inverse_inertia() const { return inverse_inertia_; }
  const RotorPropagator& rotor() const { return *rotor_; }
  // Set for open lattices only.
  const BdgDecomposition* bdg() const { return bdg_ ? &*bdg_ : nullptr; }

  RswState initial_state() const;
  // Constant field h for a time dt. Collective noise acts on the rotor only, since
  // S^z_total has no finite-momentum component. Individual noise is rejected.
  void advance(RswState& state, double h, double dt, const Noise& noise) const;
  SqueezingResult squeezing(const RswState& state) const;

 private:
  LatticeSpec spec_;
  CouplingMatrix couplings_;
  double inverse_inertia_ = 0.0;
  std::shared_ptr<const RotorPropagator> rotor_;
  std::optional<PbcModeSet> pbc_vacuum_;
  std::optional<BdgDecomposition> bdg_;
};

struct TrajectoryPoint {
  double t = 0.0;
  double h = 0.0;
  double xi_squared = 1.0;
  double xi_db = 0.0;
  double mean_spin = 0.0;  // |<S>|
  double s_squared = 0.0;  // RSW estimate of <S^2>
  double n_fm = 0.0;
  bool valid = true;       // false once the mean spin is lost
};

std::vector<TrajectoryPoint> rsw_trajectory(const RswProblem& problem, const ControlField& field,
                                            const Noise& noise, const std::vector<double>& times);

/// xi^2(T) through the RSW pipeline. Infeasible evaluations (lost mean spin, unstable
/// or non-positive spin-wave state) return 10 plus a feasibility-distance proxy.
double objective(const ControlField& field, const RswProblem& problem, const Noise& noise = {});

inline constexpr double kInfeasiblePenalty = 10.0;

/// Central-difference gradient of the objective. Re-uses the states at segment
/// boundaries so that perturbing h_k only re-propagates segments k..M-1.
std::vector<double> objective_gradient(const ControlField& field, const RswProblem& problem,
                                       const Noise& noise, double step, double* value = nullptr);

struct OptimizerOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-6;
  double fd_step = 1e-4;
  double h_max = 10.0;
  int n_random_starts = 8;
  double random_amplitude = 1.0;  // seeds draw h_k uniformly from [-a, a]
  double constant_seed = 0.1;
  bool include_zero_seed = true;
  bool include_constant_seed = true;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  std::uint64_t seed = 0;
};

struct OptimizationResult {
  ControlField best_field;
  double xi_squared_opt = 1.0;
  double xi_db_opt = 0.0;
  std::vector<double> objective_history;  // accepted iterates of the winning start
  double gradient_norm_final = 0.0;
  int n_evaluations = 0;
  bool converged = false;
  int best_start = 0;
  std::vector<double> start_objectives;  // final value per start, in start order
};

/// Called after each finished start with the best result so far.
using CheckpointFn = std::function<void(const OptimizationResult&)>;

/// Projected BFGS with Armijo backtracking inside |h_k| <= h_max, started from the
/// initial field, then the zero and constant seeds, then n_random_starts random fields.
/// Start r draws from a generator seeded with (options.seed, r).
OptimizationResult optimize(const ControlField& initial, const RswProblem& problem,
                            const Noise& noise = {}, const OptimizerOptions& options = {},
                            const CheckpointFn& checkpoint = {});

/// Ordinary least squares t = slope N + intercept.
std::pair<double, double> crossover_time_fit(const std::vector<double>& sizes,
                                             const std::vector<double>& t_values);

}  // namespace rsw
