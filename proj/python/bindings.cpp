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


#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rsw/config.hpp"
#include "rsw/control.hpp"
#include "rsw/error.hpp"
#include "rsw/experiment.hpp"
#include "rsw/lattice.hpp"
#include "rsw/observables.hpp"
#include "rsw/oracle.hpp"
#include "rsw/rotor.hpp"

namespace py = pybind11;
using namespace rsw;

namespace {

Boundary parse_boundary(const std::string& b) {
  if (b == "periodic") return Boundary::Periodic;
  if (b == "open") return Boundary::Open;
  throw std::invalid_argument("boundary must be 'periodic' or 'open'");
}

LatticeSpec make_spec(int lx, int ly, const std::string& boundary, double alpha, double coupling) {
  LatticeSpec s;
  s.lx = lx;
  s.ly = ly;
  s.boundary = parse_boundary(boundary);
  s.alpha = alpha;
  s.coupling = coupling;
  s.validate();
  return s;
}

Noise make_noise(const std::string& kind, double rate) {
  if (kind == "none") return Noise::none();
  if (kind == "collective") return Noise::collective(rate);
  if (kind == "individual") return Noise::individual(rate);
  throw std::invalid_argument("noise must be 'none', 'collective' or 'individual'");
}

ControlField make_field(double total_time, const std::vector<double>& segments) {
  ControlField f{total_time, segments};
  f.validate();
  return f;
}

py::dict trajectory_dict(const std::vector<TrajectoryPoint>& points) {
  std::vector<double> t, h, xi2, xi_db, mean, s2, n_fm;
  std::vector<bool> valid;
  for (const auto& p : points) {
    t.push_back(p.t);
    h.push_back(p.h);
    xi2.push_back(p.xi_squared);
    xi_db.push_back(p.xi_db);
    mean.push_back(p.mean_spin);
    s2.push_back(p.s_squared);
    n_fm.push_back(p.n_fm);
    valid.push_back(p.valid);
  }
  py::dict d;
  d["t"] = t;
  d["h"] = h;
  d["xi_squared"] = xi2;
  d["xi_db"] = xi_db;
  d["mean_spin"] = mean;
  d["s_squared"] = s2;
  d["n_fm"] = n_fm;
  d["valid"] = valid;
  return d;
}

}  // namespace

PYBIND11_MODULE(_rsw, m) {
  m.doc() = "Rotor/spin-wave squeezing simulator";
  m.attr("__version__") = kCodeVersion;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<LostMeanSpinError>(m, "LostMeanSpinError", numerical.ptr());
  py::register_exception<InstabilityError>(m, "InstabilityError", numerical.ptr());
  py::register_exception<DecompositionError>(m, "DecompositionError", numerical.ptr());

  m.def(
      "couplings",
      [](int lx, int ly, const std::string& boundary, double alpha, double coupling) {
        return build_couplings(make_spec(lx, ly, boundary, alpha, coupling)).values;
      },
      py::arg("lx"), py::arg("ly"), py::arg("boundary") = "periodic", py::arg("alpha") = 3.0,
      py::arg("coupling") = 1.0, "Coupling matrix J_ij = 4 J d^-alpha.");

  m.def(
      "collective_chi", [](const Eigen::MatrixXd& j) { return collective_chi(CouplingMatrix{j}); },
      py::arg("couplings"));
  m.def(
      "inverse_inertia", [](const Eigen::MatrixXd& j) { return inverse_inertia(CouplingMatrix{j}); },
      py::arg("couplings"));

  py::class_<RswProblem>(m, "Problem")
      .def(py::init([](int lx, int ly, const std::string& boundary, double alpha, double coupling) {
             return RswProblem(make_spec(lx, ly, boundary, alpha, coupling));
           }),
           py::arg("lx"), py::arg("ly"), py::arg("boundary") = "periodic", py::arg("alpha") = 3.0,
           py::arg("coupling") = 1.0)
      .def_property_readonly("n_spins", &RswProblem::n_spins)
      .def_property_readonly("inverse_inertia", &RswProblem::inverse_inertia)
      .def_property_readonly("couplings", [](const RswProblem& p) { return p.couplings().values; })
      .def(
          "trajectory",
          [](const RswProblem& p, double total_time, const std::vector<double>& segments,
             const std::vector<double>& times, const std::string& noise, double rate) {
            std::vector<TrajectoryPoint> points;
            {
              py::gil_scoped_release release;
              points = rsw_trajectory(p, make_field(total_time, segments), make_noise(noise, rate), times);
            }
            return trajectory_dict(points);
          },
          py::arg("total_time"), py::arg("segments"), py::arg("times"), py::arg("noise") = "none",
          py::arg("rate") = 0.0)
      .def(
          "objective",
          [](const RswProblem& p, double total_time, const std::vector<double>& segments,
             const std::string& noise, double rate) {
            return objective(make_field(total_time, segments), p, make_noise(noise, rate));
          },
          py::arg("total_time"), py::arg("segments"), py::arg("noise") = "none", py::arg("rate") = 0.0)
      .def(
          "optimize",
          [](const RswProblem& p, double total_time, const std::vector<double>& segments,
             const std::string& noise, double rate, int max_iterations, int random_starts,
             double random_amplitude, double h_max, std::uint64_t seed) {
            OptimizerOptions o;
            o.max_iterations = max_iterations;
            o.n_random_starts = random_starts;
            o.random_amplitude = random_amplitude;
            o.h_max = h_max;
            o.seed = seed;
            OptimizationResult r;
            {
              py::gil_scoped_release release;
              r = optimize(make_field(total_time, segments), p, make_noise(noise, rate), o);
            }
            py::dict d;
            d["segments"] = r.best_field.segments;
            d["total_time"] = r.best_field.total_time;
            d["xi_squared"] = r.xi_squared_opt;
            d["xi_db"] = r.xi_db_opt;
            d["history"] = r.objective_history;
            d["converged"] = r.converged;
            d["n_evaluations"] = r.n_evaluations;
            d["best_start"] = r.best_start;
            return d;
          },
          py::arg("total_time"), py::arg("segments"), py::arg("noise") = "none", py::arg("rate") = 0.0,
          py::arg("max_iterations") = 200, py::arg("random_starts") = 8, py::arg("random_amplitude") = 5.0,
          py::arg("h_max") = 10.0, py::arg("seed") = 0);

  m.def(
      "exact_xi_squared",
      [](const Eigen::MatrixXd& j, double total_time, const std::vector<double>& segments,
         const std::vector<double>& times) {
        const CouplingMatrix c{j};
        const OracleTrajectory tr = evolve_krylov(product_css_x(c.n_sites()), c, make_field(total_time, segments), times);
        std::vector<double> out;
        for (const auto& mom : tr.moments) out.push_back(squeezing_exact(mom, c.n_sites()).xi_squared);
        return out;
      },
      py::arg("couplings"), py::arg("total_time"), py::arg("segments"), py::arg("times"),
      py::call_guard<py::gil_scoped_release>(), "Wineland xi^2 from exact Krylov evolution (N <= 16).");

  m.def(
      "tat_benchmark",
      [](int n, double chi, const std::vector<double>& grid) {
        const TatBenchmark b = tat_benchmark(n, chi, grid);
        return py::make_tuple(b.xi_squared_min, b.time_at_min);
      },
      py::arg("n_spins"), py::arg("chi"), py::arg("t_grid"));

  m.def(
      "run_config",
      [](const std::string& text, py::object seed) {
        ExperimentConfig cfg = parse_config(text);
        if (!seed.is_none()) set_seed(cfg, seed.cast<std::uint64_t>(), text);
        py::gil_scoped_release release;
        return run_experiment(cfg);
      },
      py::arg("text"), py::arg("seed") = py::none(),
      "Runs a YAML config held in memory and returns {file name: contents}.");
}
