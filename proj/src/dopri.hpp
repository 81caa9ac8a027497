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

// Adaptive Dormand-Prince 5(4) integration of complex matrix ODEs on top of the
// boost.odeint controlled stepper. Internal to the library.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <Eigen/Dense>

#include "rsw/error.hpp"

namespace rsw::detail {

using RealState = std::vector<double>;

inline Eigen::Map<Eigen::MatrixXcd> as_matrix(RealState& x, Eigen::Index rows, Eigen::Index cols) {
  return {reinterpret_cast<std::complex<double>*>(x.data()), rows, cols};
}
inline Eigen::Map<const Eigen::MatrixXcd> as_matrix(const RealState& x, Eigen::Index rows,
                                                    Eigen::Index cols) {
  return {reinterpret_cast<const std::complex<double>*>(x.data()), rows, cols};
}

// Integrates dX/dt = rhs(X) for a square complex matrix X from t0 to t1; rhs(X, out)
// writes the rate into `out`. `dt` carries
// the step-size guess across calls. `post_step` runs on every accepted step.
template <class Rhs, class PostStep>
void integrate_matrix(Rhs&& rhs, Eigen::MatrixXcd& state, double t0, double t1, double& dt,
                      double rtol, double atol, PostStep&& post_step) {
  namespace odeint = boost::numeric::odeint;
  if (!(t1 > t0)) return;
  const Eigen::Index n = state.rows();
  RealState x(static_cast<std::size_t>(2 * state.size()));
  as_matrix(x, n, n) = state;

  auto system = [&](const RealState& in, RealState& out, double /*t*/) {
    auto rate = as_matrix(out, n, n);
    rhs(as_matrix(in, n, n), rate);
  };
  auto stepper = odeint::make_controlled(atol, rtol, odeint::runge_kutta_dopri5<RealState>());

  double t = t0;
  const double min_step = 1e-13 * std::max(1.0, std::abs(t1));
  dt = std::min(dt, t1 - t0);
  while (t < t1) {
    const bool last = (t + dt >= t1);
    double step = last ? t1 - t : dt;
    const double t_before = t;
    if (stepper.try_step(system, x, t, step) == odeint::success) {
      // try_step advanced t and proposed the next step in `step`.
      if (last) t = t1;
      auto view = as_matrix(x, n, n);
      post_step(view);
      if (!last || step < dt) dt = step;
    } else {
      dt = step;
      if (dt < min_step) {
        throw IntegrationError("Lindblad integration step size underflow at t = " +
                               std::to_string(t_before));
      }
    }
  }
  state = as_matrix(x, n, n);
}

}  // namespace rsw::detail
