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

#include "rsw/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rsw/control.hpp"
#include "rsw/error.hpp"
#include "rsw/observables.hpp"
#include "rsw/oracle.hpp"
#include "rsw/rotor.hpp"

namespace rsw {
namespace {

using json = nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double db(double xi2) { return -10.0 * std::log10(xi2); }

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json meta(const ExperimentConfig& cfg) {
  return {{"code_version", kCodeVersion},
          {"schema_version", kSchemaVersion},
          {"config_sha256", cfg.config_hash},
          {"mode", mode_name(cfg.mode)},
          {"seed", cfg.seed}};
}

json lattice_json(const LatticeSpec& s) {
  return {{"lx", s.lx},
          {"ly", s.ly},
          {"boundary", s.boundary == Boundary::Periodic ? "periodic" : "open"},
          {"alpha", s.alpha},
          {"coupling", s.coupling}};
}

json field_json(const ControlField& f) {
  return {{"total_time", f.total_time}, {"segments", f.segments}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

class Csv {
 public:
  Csv(const ExperimentConfig& cfg, const std::vector<std::string>& columns) {
    out_ << "# rswsqueeze " << kCodeVersion << "\n"
         << "# schema_version " << kSchemaVersion << "\n"
         << "# config_sha256 " << cfg.config_hash << "\n"
         << "# mode " << mode_name(cfg.mode) << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }
  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << num(values[i]);
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string trajectory_csv(const ExperimentConfig& cfg, const std::vector<TrajectoryPoint>& points,
                           int n_spins) {
  const double s_max = 0.5 * n_spins;
  Csv csv(cfg, {"t", "xi_db", "mean_spin", "s_squared", "n_fm", "h"});
  for (const auto& p : points) {
    csv.row({p.t, p.xi_db, p.mean_spin / s_max, p.s_squared / (s_max * (s_max + 1.0)), p.n_fm, p.h});
  }
  return csv.str();
}

// Rotor-only state at each requested time, for the phase-space snapshots.
std::vector<RotorState> rotor_snapshots(const RswProblem& problem, const ControlField& field,
                                        const Noise& noise, const std::vector<double>& times) {
  const RotorState init = initial_css_x(problem.n_spins());
  if (noise.kind == NoiseKind::Collective) {
    return evolve_lindblad_collective(init, problem.rotor(), field, noise.rate, times).states;
  }
  return evolve_unitary(init, problem.rotor(), field, times).states;
}

void add_husimi(const ExperimentConfig& cfg, const RswProblem& problem, const ControlField& field,
                OutputFiles& files) {
  if (cfg.husimi.times.empty()) return;
  std::vector<double> times = cfg.husimi.times;
  std::sort(times.begin(), times.end());
  const std::vector<double> theta = linear_grid(0.0, M_PI, cfg.husimi.n_theta);
  const std::vector<double> phi = linear_grid(-M_PI, M_PI, cfg.husimi.n_phi);
  const auto states = rotor_snapshots(problem, field, cfg.noise, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Eigen::MatrixXd q = husimi_q(states[i], theta, phi);
    Csv csv(cfg, {"theta", "phi", "q"});
    for (Eigen::Index a = 0; a < q.rows(); ++a) {
      for (Eigen::Index b = 0; b < q.cols(); ++b) csv.row({theta[a], phi[b], q(a, b)});
    }
    char name[64];
    std::snprintf(name, sizeof name, "husimi_%03zu.csv", i);
    files[name] = csv.str();
  }
  json index = {{"meta", meta(cfg)}, {"times", times}};
  files["husimi_index.json"] = dump(index);
}

json bdg_json(const BdgDecomposition& d) {
  const Eigen::MatrixXd eta = nambu_eta(d.n_sites);
  const Eigen::MatrixXcd lhs = d.t * d.eta_tilde() * d.t.adjoint();
  return {{"frequencies", std::vector<double>(d.frequencies.data(), d.frequencies.data() + d.frequencies.size())},
          {"mu", d.mu},
          {"sector_sizes", d.sector_sizes},
          {"paraunitarity_residual", (lhs - eta.cast<std::complex<double>>()).norm()},
          {"projector_idempotency_residual", (d.projector * d.projector - d.projector).norm()}};
}

OutputFiles run_simulate(const ExperimentConfig& cfg) {
  const RswProblem problem(cfg.lattice);
  const auto times = uniform_samples(cfg.field.total_time, cfg.time_samples);
  const auto points = rsw_trajectory(problem, cfg.field, cfg.noise, times);
  OutputFiles files;
  files["trajectory.csv"] = trajectory_csv(cfg, points, problem.n_spins());

  double best = NAN;
  double best_t = NAN;
  for (const auto& p : points) {
    if (p.valid && (std::isnan(best) || p.xi_db > best)) {
      best = p.xi_db;
      best_t = p.t;
    }
  }
  json summary = {{"meta", meta(cfg)},
                  {"lattice", lattice_json(cfg.lattice)},
                  {"field", field_json(cfg.field)},
                  {"final_xi_db", nullable(points.back().xi_db)},
                  {"best_xi_db", nullable(best)},
                  {"best_time", nullable(best_t)},
                  {"inverse_inertia", problem.inverse_inertia()}};
  if (const BdgDecomposition* d = problem.bdg()) summary["bdg"] = bdg_json(*d);
  files["summary.json"] = dump(summary);
  add_husimi(cfg, problem, cfg.field, files);
  return files;
}

json optimization_json(const ExperimentConfig& cfg, const OptimizationResult& r) {
  return {{"meta", meta(cfg)},
          {"best_field", field_json(r.best_field)},
          {"xi_squared_opt", r.xi_squared_opt},
          {"xi_db_opt", r.xi_db_opt},
          {"objective_history", r.objective_history},
          {"gradient_norm_final", r.gradient_norm_final},
          {"n_evaluations", r.n_evaluations},
          {"converged", r.converged},
          {"best_start", r.best_start},
          {"start_objectives", r.start_objectives}};
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << data;
  }
  std::filesystem::rename(tmp, path);
}

OutputFiles run_optimize(const ExperimentConfig& cfg, const std::filesystem::path* checkpoint_dir) {
  const RswProblem problem(cfg.lattice);
  OptimizerOptions opt = cfg.optimizer;
  opt.seed = cfg.seed;
  CheckpointFn checkpoint;
  if (checkpoint_dir) {
    checkpoint = [&](const OptimizationResult& r) {
      std::filesystem::create_directories(*checkpoint_dir);
      write_file(*checkpoint_dir / "checkpoint.json", dump(optimization_json(cfg, r)));
    };
  }
  const OptimizationResult r = optimize(cfg.field, problem, cfg.noise, opt, checkpoint);
  const double uncontrolled =
      objective(ControlField::constant(cfg.field.total_time, cfg.segments, 0.0), problem, cfg.noise);

  OutputFiles files;
  json result = optimization_json(cfg, r);
  result["lattice"] = lattice_json(cfg.lattice);
  result["uncontrolled_xi_squared"] = uncontrolled;
  result["uncontrolled_feasible"] = uncontrolled < kInfeasiblePenalty;
  files["result.json"] = dump(result);
  files["checkpoint.json"] = dump(optimization_json(cfg, r));
  const auto times = uniform_samples(cfg.field.total_time, cfg.time_samples);
  files["trajectory.csv"] =
      trajectory_csv(cfg, rsw_trajectory(problem, r.best_field, cfg.noise, times), problem.n_spins());
  add_husimi(cfg, problem, r.best_field, files);
  return files;
}

OutputFiles run_tat(const ExperimentConfig& cfg) {
  Csv csv(cfg, {"n", "xi_squared_min", "xi_db_min", "chi_t_at_min"});
  const std::vector<double> grid = uniform_samples(cfg.tat.t_max, cfg.tat.samples);
  for (int n : cfg.tat.sizes) {
    // chi = 1: the time column is then chi t.
    const TatBenchmark b = tat_benchmark(n, 1.0, grid);
    csv.row({double(n), b.xi_squared_min, db(b.xi_squared_min), b.time_at_min});
  }
  return {{"tat_benchmark.csv", csv.str()}};
}

OutputFiles run_oracle(const ExperimentConfig& cfg) {
  const RswProblem problem(cfg.lattice);
  const int n = problem.n_spins();
  ControlField field = cfg.field;
  if (cfg.oracle.optimize_first) {
    OptimizerOptions opt = cfg.optimizer;
    opt.seed = cfg.seed;
    const Noise rsw_noise = cfg.noise.kind == NoiseKind::Collective ? cfg.noise : Noise::none();
    field = optimize(field, problem, rsw_noise, opt).best_field;
  }
  const auto times = uniform_samples(field.total_time, cfg.time_samples);
  json points = json::array();
  double max_dev = 0.0;
  const ManyBodyState init = product_css_x(n);

  if (cfg.noise.kind == NoiseKind::Individual) {
    // Unraveling check: trajectory average against the full master equation.
    const McwfResult mc = evolve_mcwf_individual(init, problem.couplings(), field, cfg.noise.rate,
                                                 cfg.oracle.trajectories, cfg.seed, times);
    const OracleTrajectory full = evolve_lindblad_full(init, problem.couplings(), field, cfg.noise.rate,
                                                       times, Dephasing::Individual);
    double max_z = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double exact = squeezing_exact(full.moments[i], n).xi_squared;
      const auto& p = mc.points[i];
      const double z = p.xi_squared_se > 0.0 ? std::abs(p.xi_squared - exact) / p.xi_squared_se : 0.0;
      max_z = std::max(max_z, z);
      points.push_back({{"t", times[i]},
                        {"trajectory_xi_squared", p.xi_squared},
                        {"trajectory_xi_squared_se", p.xi_squared_se},
                        {"master_equation_xi_squared", exact},
                        {"z_score", z}});
    }
    json report = {{"meta", meta(cfg)},
                   {"lattice", lattice_json(cfg.lattice)},
                   {"field", field_json(field)},
                   {"comparison", "trajectories_vs_master_equation"},
                   {"trajectories", cfg.oracle.trajectories},
                   {"points", points},
                   {"max_z_score", max_z}};
    return {{"oracle_report.json", dump(report)}};
  }

  const auto rsw = rsw_trajectory(problem, field, cfg.noise, times);
  const OracleTrajectory exact =
      cfg.noise.kind == NoiseKind::Collective
          ? evolve_lindblad_full(init, problem.couplings(), field, cfg.noise.rate, times,
                                 Dephasing::Collective)
          : evolve_krylov(init, problem.couplings(), field, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double oracle_xi2 = NAN;
    try {
      oracle_xi2 = squeezing_exact(exact.moments[i], n).xi_squared;
    } catch (const LostMeanSpinError&) {
    }
    const double rsw_xi2 = rsw[i].xi_squared;
    const double abs_db = std::abs(db(rsw_xi2) - db(oracle_xi2));
    if (std::isfinite(abs_db)) max_dev = std::max(max_dev, abs_db);
    points.push_back({{"t", times[i]},
                      {"rsw_xi_db", nullable(db(rsw_xi2))},
                      {"oracle_xi_db", nullable(db(oracle_xi2))},
                      {"abs_deviation_db", nullable(abs_db)},
                      {"rel_deviation", nullable(std::abs(rsw_xi2 - oracle_xi2) / oracle_xi2)},
                      {"oracle_mean_spin", exact.moments[i].mean.norm()},
                      {"oracle_s_squared", exact.moments[i].total_spin_squared()}});
  }
  json report = {{"meta", meta(cfg)},
                 {"lattice", lattice_json(cfg.lattice)},
                 {"field", field_json(field)},
                 {"comparison", cfg.noise.kind == NoiseKind::Collective ? "rsw_vs_master_equation"
                                                                         : "rsw_vs_exact_unitary"},
                 {"points", points},
                 {"max_abs_deviation_db", max_dev}};
  return {{"oracle_report.json", dump(report)}};
}

OutputFiles run_sweep(const ExperimentConfig& cfg) {
  const RswProblem problem(cfg.lattice);
  Csv csv(cfg, {"gamma", "total_time", "xi_db_opt", "xi_db_uncontrolled", "converged", "n_evaluations"});
  json rows = json::array();
  for (double t : cfg.sweep.total_times) {
    // Each rate warm-starts from the optimum at the previous rate.
    ControlField start = cfg.field;
    start.total_time = t;
    bool first = true;
    for (double gamma : cfg.sweep.rates) {
      const Noise noise = gamma > 0.0 ? Noise::collective(gamma) : Noise::none();
      OptimizerOptions opt = cfg.optimizer;
      opt.seed = cfg.seed;
      if (!first) {
        // later rates only refine the previous optimum
        opt.n_random_starts = 0;
        opt.include_zero_seed = false;
        opt.include_constant_seed = false;
      }
      first = false;
      const OptimizationResult r = optimize(start, problem, noise, opt);
      const double unc = objective(ControlField::constant(t, cfg.segments, 0.0), problem, noise);
      const double unc_db = unc < kInfeasiblePenalty ? db(unc) : NAN;
      csv.row({gamma, t, r.xi_db_opt, unc_db, r.converged ? 1.0 : 0.0, double(r.n_evaluations)});
      rows.push_back({{"gamma", gamma}, {"total_time", t}, {"best_field", field_json(r.best_field)}});
      start = r.best_field;
    }
  }
  return {{"dephasing_sweep.csv", csv.str()},
          {"dephasing_sweep_fields.json", dump({{"meta", meta(cfg)}, {"runs", rows}})}};
}

}  // namespace

OutputFiles run_experiment(const ExperimentConfig& cfg, const std::filesystem::path* checkpoint_dir) {
  switch (cfg.mode) {
    case RunMode::Simulate: return run_simulate(cfg);
    case RunMode::Optimize: return run_optimize(cfg, checkpoint_dir);
    case RunMode::TatBenchmark: return run_tat(cfg);
    case RunMode::OracleValidate: return run_oracle(cfg);
    case RunMode::DephasingSweep: return run_sweep(cfg);
  }
  throw ConfigError("unknown mode");
}

void write_outputs(const OutputFiles& files, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, data] : files) write_file(dir / name, data);
}

}  // namespace rsw
