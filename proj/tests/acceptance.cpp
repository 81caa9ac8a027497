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


// Acceptance suite. Prints one PASS/FAIL line per criterion; `--criterion N` runs a
// subset. Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "rsw/config.hpp"
#include "rsw/control.hpp"
#include "rsw/experiment.hpp"
#include "rsw/lattice.hpp"
#include "rsw/observables.hpp"
#include "rsw/oracle.hpp"
#include "rsw/rotor.hpp"
#include "rsw/spinwave.hpp"
#include "support/bdg_checks.hpp"
#include "support/oracles.hpp"

namespace rsw::acceptance {
namespace {

// Tolerances.
constexpr double kCssTol = 1e-9;
constexpr double kOatRelTol = 1e-6;
constexpr double kRswEdDb = 0.3;
constexpr double kRswEdRel = 0.05;       // 2x2 trace and Jt = 0.3 point
constexpr double kRswEdRandomRel = 0.02; // 2x2, M = 8 random field
constexpr double kBdgTol = 1e-9;
constexpr double kZeroModeRel = 1e-9;
constexpr double kAdvantageMarginDb = 0.2;
constexpr double kOptimizerNoiseDb = 0.1;
constexpr double kMcwfSigmas = 3.0;
constexpr double kObcRswEdDb = 0.6;
constexpr double kDephasingOracleTol = 1e-6;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void require(bool ok) { pass = pass && ok; }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

LatticeSpec lattice(int lx, int ly, Boundary b = Boundary::Periodic) {
  LatticeSpec s;
  s.lx = lx;
  s.ly = ly;
  s.boundary = b;
  s.alpha = 3.0;
  return s;
}

std::string name(const LatticeSpec& s) {
  return fmt("%dx%d %s", s.lx, s.ly, s.boundary == Boundary::Open ? "open" : "periodic");
}

std::vector<double> ed_xi_squared(const CouplingMatrix& c, const ControlField& field,
                                  const std::vector<double>& times) {
  const OracleTrajectory tr = evolve_krylov(product_css_x(c.n_sites()), c, field, times);
  std::vector<double> out;
  for (const auto& m : tr.moments) out.push_back(squeezing_exact(m, c.n_sites()).xi_squared);
  return out;
}

double db(double xi2) { return testing::to_db(xi2); }

// Collective S^z dephasing at zero field commutes with the XX Hamiltonian, so it acts on
// the unitary moments directly: components changing S^z by d decay as exp(-gamma d^2 t / 2).
SpinMoments dephase_collective(const SpinMoments& m, double gamma, double t) {
  const double a1 = std::exp(-0.5 * gamma * t);
  const double a2 = std::exp(-2.0 * gamma * t);
  SpinMoments out = m;
  out.mean.x() *= a1;
  out.mean.y() *= a1;
  out.second(0, 2) *= a1;
  out.second(2, 0) *= a1;
  out.second(1, 2) *= a1;
  out.second(2, 1) *= a1;
  const double avg = 0.5 * (m.second(0, 0) + m.second(1, 1));
  const double diff = 0.5 * (m.second(0, 0) - m.second(1, 1));
  out.second(0, 0) = avg + a2 * diff;
  out.second(1, 1) = avg - a2 * diff;
  out.second(0, 1) *= a2;
  out.second(1, 0) *= a2;
  return out;
}

OptimizerOptions optimizer(int iterations, int starts, double amplitude, std::uint64_t seed) {
  OptimizerOptions o;
  o.max_iterations = iterations;
  o.n_random_starts = starts;
  o.random_amplitude = amplitude;
  o.seed = seed;
  return o;
}

// ---------------------------------------------------------------------------

Outcome css_baseline() {
  Outcome out;
  std::vector<LatticeSpec> specs;
  for (int lx = 1; lx <= 6; ++lx)
    for (int ly = 1; ly <= 6; ++ly)
      for (Boundary b : {Boundary::Periodic, Boundary::Open})
        if (lx * ly >= 2) specs.push_back(lattice(lx, ly, b));
  specs.push_back(lattice(10, 10, Boundary::Periodic));
  specs.push_back(lattice(10, 10, Boundary::Open));
  double worst = 0.0;
  for (const auto& s : specs) {
    const RswProblem problem(s);
    const double a = problem.squeezing(problem.initial_state()).xi_squared;
    const auto tr = rsw_trajectory(problem, ControlField::constant(0.5, 4, 1.0), Noise::none(), {0.0});
    double dev = std::max(std::abs(a - 1.0), std::abs(tr[0].xi_squared - 1.0));
    if (s.n_sites() <= 12) dev = std::max(dev, std::abs(squeezing_exact(product_css_x(s.n_sites())).xi_squared - 1.0));
    worst = std::max(worst, dev);
  }
  out.require(worst <= kCssTol);
  out.detail = fmt("%zu lattices, max |xi^2(0) - 1| = %.2e (tol %.0e)", specs.size(), worst, kCssTol);
  return out;
}

Outcome oat_oracle() {
  Outcome out;
  double worst = 0.0;
  int points = 0;
  for (const auto& s : {lattice(2, 4), lattice(4, 4), lattice(4, 8)}) {
    const RswProblem problem(s);
    const int n = s.n_sites();
    const double chi = problem.inverse_inertia();
    const std::vector<double> times = uniform_samples(1.0, 201);
    const auto tr = evolve_unitary(initial_css_x(n), problem.rotor(), ControlField::constant(1.0, 1, 0.0), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double chi_t = chi * times[i];
      if (std::pow(std::cos(chi_t), n - 1) < 1e-3) continue;  // mean spin gone, ratio undefined
      const double got = squeezing_from_rsw(tr.states[i], problem.rotor().operators(), 0.0).xi_squared;
      worst = std::max(worst, std::abs(got / testing::ku_wineland(n, chi_t) - 1.0));
      ++points;
    }
  }
  out.require(worst <= kOatRelTol && points > 100);
  out.detail = fmt("N = 8, 16, 32, %d points, max relative deviation %.2e (tol %.0e)", points, worst, kOatRelTol);
  return out;
}

Outcome rsw_vs_ed_periodic() {
  Outcome out;
  const std::vector<double> times = uniform_samples(1.0, 101);
  const ControlField zero = ControlField::constant(1.0, 1, 0.0);
  std::string worst_where;
  double worst = 0.0;
  for (const auto& s : {lattice(2, 2), lattice(3, 3)}) {
    const RswProblem problem(s);
    const auto rsw = rsw_trajectory(problem, zero, Noise::none(), times);
    const auto ed = ed_xi_squared(problem.couplings(), zero, times);
    double lat_worst = 0.0, at = 0.0;
    int invalid = 0;
    double first_invalid = NAN, first_exceed = NAN;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!rsw[i].valid || !std::isfinite(rsw[i].xi_squared)) {
        if (invalid++ == 0) first_invalid = times[i];
        continue;
      }
      const double d = std::abs(rsw[i].xi_db - db(ed[i]));
      if (d > kRswEdDb && std::isnan(first_exceed)) first_exceed = times[i];
      if (d > lat_worst) lat_worst = d, at = times[i];
    }
    out.require(invalid == 0 && lat_worst <= kRswEdDb);
    out.notes.push_back(fmt("%s: first exceeds %.1f dB at Jt = %.2f; max |dB diff| %.3f at Jt = %.2f over valid points, "
                            "%d of %zu points lose the mean spin%s",
                            name(s).c_str(), kRswEdDb, first_exceed, lat_worst, at, invalid, times.size(),
                            invalid ? fmt(" (from Jt = %.2f)", first_invalid).c_str() : ""));
    if (lat_worst > worst) worst = lat_worst, worst_where = name(s);
  }
  out.detail = fmt("max |dB diff| %.3f on %s (tol %.1f dB, all Jt <= 1 must be valid)", worst, worst_where.c_str(), kRswEdDb);

  // Smaller checks at N = 4.
  const RswProblem p22(lattice(2, 2));
  {
    const auto rsw = rsw_trajectory(p22, zero, Noise::none(), {0.3});
    const double ed = ed_xi_squared(p22.couplings(), zero, {0.3})[0];
    const double rel = std::abs(rsw[0].xi_squared / ed - 1.0);
    out.notes.push_back(fmt("2x2 Jt = 0.3: RSW %.4f, ED %.4f, relative %.3f (tol %.2f) %s", rsw[0].xi_squared, ed, rel,
                            kRswEdRel, rel <= kRswEdRel ? "ok" : "exceeded"));
    double trace_worst = 0.0, at = 0.0;
    const auto tr = rsw_trajectory(p22, zero, Noise::none(), times);
    const auto ed_tr = ed_xi_squared(p22.couplings(), zero, times);
    for (std::size_t i = 0; i < times.size() && tr[i].valid; ++i) {
      const double r = std::abs(tr[i].xi_squared / ed_tr[i] - 1.0);
      if (r > trace_worst) trace_worst = r, at = times[i];
    }
    out.notes.push_back(fmt("2x2 trace Jt <= 1: max relative %.3f at Jt = %.2f before the mean spin is lost (tol %.2f) %s",
                            trace_worst, at, kRswEdRel, trace_worst <= kRswEdRel ? "ok" : "exceeded"));
  }
  {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ControlField f = ControlField::constant(1.0, 8, 0.0);
    for (double& h : f.segments) h = u(rng);
    const double rsw = objective(f, p22);
    const double ed = ed_xi_squared(p22.couplings(), f, {1.0})[0];
    const double rel = std::abs(rsw / ed - 1.0);
    out.notes.push_back(fmt("2x2 M = 8 random field: RSW objective %.4f%s, ED %.4f, relative %.3f (tol %.2f) %s", rsw,
                            rsw < kInfeasiblePenalty ? "" : " (mean spin lost)", ed, rel, kRswEdRandomRel,
                            rel <= kRswEdRandomRel ? "ok" : "exceeded"));
  }
  return out;
}

Outcome bdg_structure() {
  Outcome out;
  std::mt19937_64 rng(77);
  testing::BdgResiduals worst;
  double gram_min = INFINITY, gram_dev = 0.0;
  std::string sizes;
  for (int draw = 0; draw < 20; ++draw) {
    const CouplingMatrix c = testing::random_connected_couplings(rng, draw, Boundary::Open);
    const QuadraticHamiltonian q = build_quadratic(c, 0.0);
    const BdgDecomposition d = bdg_decompose(q);
    const testing::BdgResiduals r = testing::bdg_residuals(q, d);
    worst.paraunitarity = std::max(worst.paraunitarity, r.paraunitarity);
    worst.conjugation = std::max(worst.conjugation, r.conjugation);
    worst.diagonalization = std::max(worst.diagonalization, r.diagonalization);
    worst.zero_mode = std::max(worst.zero_mode, r.zero_mode);
    worst.jordan = std::max(worst.jordan, r.jordan);
    worst.pq_norm = std::max(worst.pq_norm, r.pq_norm);
    worst.projector_idempotent = std::max(worst.projector_idempotent, r.projector_idempotent);
    worst.projector_kills_pq = std::max(worst.projector_kills_pq, r.projector_kills_pq);
    worst.uniform_kernel = std::max(worst.uniform_kernel, r.uniform_kernel);
    // Gram matrix of the positive-norm finite modes.
    const int f = d.n_sites - 1;
    const Eigen::MatrixXcd s_plus = d.t.middleCols(2, f);
    const Eigen::MatrixXcd gram = s_plus.adjoint() * nambu_eta(d.n_sites).cast<std::complex<double>>() * s_plus;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    gram_min = std::min(gram_min, es.eigenvalues().minCoeff());
    gram_dev = std::max(gram_dev, testing::max_abs(gram - Eigen::MatrixXcd::Identity(f, f)));
    sizes += (sizes.empty() ? "" : ",") + std::to_string(d.n_sites);
  }
  out.require(worst.worst() <= kBdgTol && gram_dev <= kBdgTol && gram_min > 0.0);
  out.detail = fmt("20 lattices, worst residual %.1e, Gram min eigenvalue %.6f, |G - 1| %.1e (tol %.0e)", worst.worst(),
                   gram_min, gram_dev, kBdgTol);
  out.notes.push_back("N = " + sizes);
  out.notes.push_back(fmt("paraunitarity %.1e, conjugation %.1e, diagonalization %.1e, zero mode %.1e, jordan %.1e, "
                          "PQ norm %.1e, projector %.1e / %.1e",
                          worst.paraunitarity, worst.conjugation, worst.diagonalization, worst.zero_mode,
                          worst.jordan, worst.pq_norm, worst.projector_idempotent, worst.projector_kills_pq));
  return out;
}

Outcome zero_mode_constants() {
  Outcome out;
  double worst_mu = 0.0, worst_rotor = 0.0, min_gap = INFINITY;
  for (const auto& s : {lattice(2, 2), lattice(3, 3), lattice(4, 4), lattice(2, 4), lattice(3, 5), lattice(6, 6)}) {
    const CouplingMatrix c = build_couplings(s);
    const int n = s.n_sites();
    const double j0 = fourier_coupling(c, s, {0.0, 0.0});
    const BdgDecomposition d = bdg_decompose(build_quadratic(c, 0.0));
    const double obc = 1.0 / (n * d.mu);
    const double rotor = inverse_inertia(c);
    worst_mu = std::max(worst_mu, std::abs(obc / (j0 / (2.0 * n)) - 1.0));
    worst_rotor = std::max(worst_rotor, std::abs(rotor / (j0 / (2.0 * (n - 1))) - 1.0));
    min_gap = std::min(min_gap, std::abs(rotor - obc) / rotor);
  }
  out.require(worst_mu <= kZeroModeRel && worst_rotor <= kZeroModeRel && min_gap > 1e-3);
  out.detail = fmt("1/(N mu) vs J0/(2N): %.1e, 1/(2I) vs J0/(2(N-1)): %.1e, smallest relative gap between them %.3f",
                   worst_mu, worst_rotor, min_gap);
  return out;
}

double tat_min_db(int n) {
  return db(tat_benchmark(n, 1.0, uniform_samples(3.0, 3001)).xi_squared_min);
}

Outcome control_advantage() {
  Outcome out;
  const RswProblem problem(lattice(4, 4));
  const ControlField zero = ControlField::constant(1.0, 64, 0.0);
  const OptimizationResult r = optimize(zero, problem, Noise::none(), optimizer(300, 8, 5.0, 1));
  const double unc_rsw = objective(zero, problem);
  const double unc_ed = db(ed_xi_squared(problem.couplings(), zero, {1.0})[0]);
  const double unc = unc_rsw < kInfeasiblePenalty ? std::max(db(unc_rsw), unc_ed) : unc_ed;
  const double tat = tat_min_db(16);
  const double opt_ed = db(ed_xi_squared(problem.couplings(), r.best_field, {1.0})[0]);
  out.require(r.xi_squared_opt < kInfeasiblePenalty);
  out.require(r.xi_db_opt >= unc + kAdvantageMarginDb);
  out.require(r.xi_db_opt > tat);
  out.notes.push_back(fmt("uncontrolled at Jt = 1: RSW %s, ED %.2f dB", unc_rsw < kInfeasiblePenalty
                              ? fmt("%.2f dB", db(unc_rsw)).c_str() : "loses the mean spin", unc_ed));
  out.notes.push_back(fmt("ED on the optimized field: %.2f dB", opt_ed));

  // Scalability: 10x10 runs to completion.
  bool big_ok = false;
  std::string big;
  try {
    const RswProblem p10(lattice(10, 10));
    const OptimizationResult r10 = optimize(ControlField::constant(1.0, 64, 0.0), p10, Noise::none(), optimizer(100, 2, 5.0, 3));
    big_ok = std::isfinite(r10.xi_db_opt) && r10.xi_squared_opt < kInfeasiblePenalty;
    big = fmt("10x10: %.2f dB after %d evaluations (TAT N = 100: %.2f dB)", r10.xi_db_opt, r10.n_evaluations, tat_min_db(100));
  } catch (const std::exception& e) {
    big = std::string("10x10 failed: ") + e.what();
  }
  out.require(big_ok);
  out.notes.push_back(big);
  out.detail = fmt("4x4 T = 1 M = 64: optimized %.2f dB, uncontrolled %.2f dB (margin >= %.1f), TAT N = 16 min %.2f dB",
                   r.xi_db_opt, unc, kAdvantageMarginDb, tat);
  return out;
}

Outcome dephasing_sweep() {
  Outcome out;
  // The exact zero-field reference, checked against the full master equation first.
  {
    const CouplingMatrix c = build_couplings(lattice(2, 3));
    const std::vector<double> times = uniform_samples(1.0, 6);
    const ControlField zero = ControlField::constant(1.0, 1, 0.0);
    const auto pure = evolve_krylov(product_css_x(6), c, zero, times);
    const auto full = evolve_lindblad_full(product_css_x(6), c, zero, 0.3, times);
    double dev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const SpinMoments m = dephase_collective(pure.moments[i], 0.3, times[i]);
      dev = std::max({dev, (m.mean - full.moments[i].mean).cwiseAbs().maxCoeff(),
                      (m.second - full.moments[i].second).cwiseAbs().maxCoeff()});
    }
    out.require(dev <= kDephasingOracleTol);
    out.notes.push_back(fmt("zero-field dephasing reference vs full master equation (2x3): %.1e", dev));
  }

  const RswProblem problem(lattice(4, 4));
  const std::vector<double> rates = {0.0, 0.1, 0.2, 0.3, 0.4};
  const std::vector<double> totals = {0.5, 1.0};
  std::vector<std::vector<double>> opt(totals.size());
  bool monotone = true, beats = true;
  for (std::size_t k = 0; k < totals.size(); ++k) {
    const double t = totals[k];
    const ControlField zero = ControlField::constant(t, 32, 0.0);
    const auto pure = evolve_krylov(product_css_x(16), problem.couplings(), zero, {t});
    ControlField start = zero;
    std::string row = fmt("T = %.1f:", t);
    for (double g : rates) {
      const Noise noise = g > 0.0 ? Noise::collective(g) : Noise::none();
      // Multi-start at g = 0; the noisy runs (rotor density matrix, much slower) refine
      // the optimum of the previous rate.
      OptimizerOptions o = optimizer(150, 2, 5.0, 4);
      if (g > 0.0) {
        o = optimizer(40, 0, 5.0, 4);
        o.include_zero_seed = false;
        o.include_constant_seed = false;
      }
      const OptimizationResult r = optimize(start, problem, noise, o);
      start = r.best_field;
      const double unc_ed = db(squeezing_exact(dephase_collective(pure.moments[0], g, t), 16).xi_squared);
      const double unc_rsw = objective(zero, problem, noise);
      const double unc = unc_rsw < kInfeasiblePenalty ? std::max(unc_ed, db(unc_rsw)) : unc_ed;
      if (!opt[k].empty() && r.xi_db_opt > opt[k].back() + kOptimizerNoiseDb) monotone = false;
      if (!(r.xi_db_opt > unc)) beats = false;
      opt[k].push_back(r.xi_db_opt);
      row += fmt(" g=%.1f %.2f (unc %.2f)", g, r.xi_db_opt, unc);
    }
    out.notes.push_back(row);
  }
  const bool long_wins_clean = opt[1].front() > opt[0].front();
  const bool short_wins_noisy = opt[0].back() > opt[1].back();
  out.require(monotone && beats && long_wins_clean && short_wins_noisy);
  out.detail = fmt("monotone within %.1f dB: %s, beats uncontrolled: %s, T = 1 wins at g = 0: %s, T = 0.5 wins at g = 0.4: %s",
                   kOptimizerNoiseDb, monotone ? "yes" : "no", beats ? "yes" : "no", long_wins_clean ? "yes" : "no",
                   short_wins_noisy ? "yes" : "no");
  return out;
}

Outcome unraveling() {
  Outcome out;
  const RswProblem problem(lattice(2, 2));
  const ControlField field{1.0, {0.5, 1.0, -0.5, 0.0, 2.0, 1.0, 0.0, -1.0}};
  const double gamma = 0.2;
  const std::vector<double> times = uniform_samples(1.0, 11);
  const McwfResult mc = evolve_mcwf_individual(product_css_x(4), problem.couplings(), field, gamma, 2000, 7, times);
  const OracleTrajectory full =
      evolve_lindblad_full(product_css_x(4), problem.couplings(), field, gamma, times, Dephasing::Individual);
  double max_z = 0.0;
  int compared = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const McwfPoint& p = mc.points[i];
    const SpinMoments& m = full.moments[i];
    const double pairs[3][3] = {{p.xi_squared, squeezing_exact(m, 4).xi_squared, p.xi_squared_se},
                                {p.mean_spin, m.mean.norm(), p.mean_spin_se},
                                {p.s_squared, m.total_spin_squared(), p.s_squared_se}};
    for (const auto& q : pairs) {
      if (q[2] <= 0.0) continue;  // no spread yet, e.g. t = 0
      max_z = std::max(max_z, std::abs(q[0] - q[1]) / q[2]);
      ++compared;
    }
  }
  out.require(compared >= 20 && max_z <= kMcwfSigmas);
  out.detail = fmt("N = 4, 2000 trajectories, %d comparisons, max |z| = %.2f (tol %.0f)", compared, max_z, kMcwfSigmas);
  return out;
}

Outcome obc_pipeline() {
  Outcome out;
  const RswProblem problem(lattice(3, 3, Boundary::Open));
  const ControlField zero = ControlField::constant(1.0, 32, 0.0);
  const OptimizationResult r = optimize(zero, problem, Noise::none(), optimizer(200, 4, 5.0, 2));
  const double unc_rsw = objective(zero, problem);
  const double unc_ed = db(ed_xi_squared(problem.couplings(), zero, {1.0})[0]);
  const double unc = unc_rsw < kInfeasiblePenalty ? std::max(db(unc_rsw), unc_ed) : unc_ed;

  const std::vector<double> times = uniform_samples(1.0, 51);
  const auto rsw = rsw_trajectory(problem, r.best_field, Noise::none(), times);
  const auto ed = ed_xi_squared(problem.couplings(), r.best_field, times);
  double worst = 0.0, at = 0.0;
  bool valid = true;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!rsw[i].valid) {
      valid = false;
      continue;
    }
    const double d = std::abs(rsw[i].xi_db - db(ed[i]));
    if (d > worst) worst = d, at = times[i];
  }
  const double end_diff = std::abs(r.xi_db_opt - db(ed.back()));
  out.require(r.xi_db_opt > unc && valid && worst <= kObcRswEdDb);
  out.detail = fmt("optimized %.2f dB (ED %.2f) vs uncontrolled %.2f dB; RSW vs ED on the optimized protocol max %.3f dB "
                   "at Jt = %.2f (tol %.1f)",
                   r.xi_db_opt, db(ed.back()), unc, worst, at, kObcRswEdDb);
  out.notes.push_back(fmt("endpoint difference %.3f dB; uncontrolled RSW %s", end_diff,
                          unc_rsw < kInfeasiblePenalty ? fmt("%.2f dB", db(unc_rsw)).c_str() : "loses the mean spin"));
  return out;
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

Outcome determinism() {
  Outcome out;
  const char* configs[] = {
      R"(schema_version: 1
mode: simulate
seed: 5
lattice: {lx: 4, ly: 4}
field: {total_time: 1.0, segments: 4, values: [1.0, -2.0, 0.5, 3.0]}
noise: {kind: collective, rate: 0.1}
time_grid: {samples: 21}
husimi: {theta: 9, phi: 17, times: [0.5, 1.0]}
)",
      R"(schema_version: 1
mode: optimize
seed: 11
lattice: {lx: 3, ly: 2, boundary: open}
field: {total_time: 0.8, segments: 8, value: 0.0}
optimizer: {max_iterations: 40, random_starts: 3, random_amplitude: 3.0}
time_grid: {samples: 9}
)",
      R"(schema_version: 1
mode: oracle_validate
seed: 7
lattice: {lx: 2, ly: 2}
field: {total_time: 0.5, segments: 2, values: [1.0, -1.0]}
noise: {kind: individual, rate: 0.3}
oracle_validate: {trajectories: 200}
time_grid: {samples: 3}
)"};
  int identical = 0, total = 0;
  for (const char* text : configs) {
    const ExperimentConfig cfg = parse_config(text);
    set_threads(1);
    const OutputFiles a = run_experiment(cfg);
    const OutputFiles b = run_experiment(cfg);
    set_threads(4);
    const OutputFiles c = run_experiment(cfg);
    ++total;
    if (a == b && a == c && !a.empty()) ++identical;
  }
  set_threads(1);
  out.require(identical == total);
  out.detail = fmt("%d of %d modes byte-identical across reruns and thread counts", identical, total);
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace rsw::acceptance

int main(int argc, char** argv) {
  using namespace rsw::acceptance;
  const std::vector<Criterion> all = {
      {1, "css_baseline", css_baseline},
      {2, "oat_oracle", oat_oracle},
      {3, "rsw_vs_ed_periodic", rsw_vs_ed_periodic},
      {4, "bdg_structure", bdg_structure},
      {5, "zero_mode_constants", zero_mode_constants},
      {6, "control_advantage", control_advantage},
      {7, "dephasing_sweep", dephasing_sweep},
      {8, "unraveling", unraveling},
      {9, "obc_pipeline", obc_pipeline},
      {10, "determinism", determinism},
  };
  CLI::App app{"acceptance suite"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criterion number (repeatable)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2d %-22s %s  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
