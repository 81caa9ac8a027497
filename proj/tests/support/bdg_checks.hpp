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

#include <algorithm>
#include <complex>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "rsw/lattice.hpp"
#include "rsw/spinwave.hpp"

namespace rsw::testing {

// Residuals of the structural identities a canonical BdG decomposition must satisfy.
struct BdgResiduals {
  double paraunitarity = 0.0;
  double conjugation = 0.0;
  double diagonalization = 0.0; // T^-1 eta M0 T restricted to the finite block vs diag(omega, -omega)
  double zero_mode = 0.0;       // eta M0 P
  double jordan = 0.0;          // eta M0 Q + (i / mu) P
  double pq_norm = 0.0;         // Q^+ eta P = i, Q^+ eta Q = 0, Q^+ M0 Q = 1 / mu
  double projector_idempotent = 0.0;
  double projector_kills_pq = 0.0;
  double uniform_kernel = 0.0;  // (A + B) 1

  double worst() const {
    return std::max({paraunitarity, conjugation, diagonalization, zero_mode, jordan, pq_norm,
                     projector_idempotent, projector_kills_pq, uniform_kernel});
  }
};

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline BdgResiduals bdg_residuals(const QuadraticHamiltonian& quad, const BdgDecomposition& d) {
  using cplx = std::complex<double>;
  const int n = d.n_sites;
  const Eigen::MatrixXcd eta = nambu_eta(n).cast<cplx>();
  const Eigen::MatrixXcd gamma = nambu_gamma(n).cast<cplx>();
  const Eigen::MatrixXcd m0 = d.m0.cast<cplx>();
  const Eigen::MatrixXcd em = eta * m0;
  const double scale = std::max(1.0, d.m0.cwiseAbs().maxCoeff());
  BdgResiduals r;

  const Eigen::MatrixXcd eta_t = d.eta_tilde().cast<cplx>();
  r.paraunitarity = std::max(max_abs(d.t * eta_t * d.t.adjoint() - eta),
                             max_abs(d.t.adjoint() * eta * d.t - eta_t));

  // T* = gamma T gamma~, gamma~ swapping V_k and W_k in the column order of T.
  const int f = n - 1;
  Eigen::MatrixXcd swapped(2 * n, 2 * n);
  swapped.col(0) = d.t.col(1);
  swapped.col(1) = d.t.col(0);
  swapped.middleCols(2, f) = d.t.middleCols(2 + f, f);
  swapped.middleCols(2 + f, f) = d.t.middleCols(2, f);
  r.conjugation = max_abs(d.t.conjugate() - gamma * swapped);

  const Eigen::MatrixXcd lam = d.t_inverse() * em * d.t;
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(2 * f, 2 * f);
  for (int k = 0; k < f; ++k) {
    want(k, k) = d.frequencies(k);
    want(f + k, f + k) = -d.frequencies(k);
  }
  r.diagonalization = max_abs(lam.bottomRightCorner(2 * f, 2 * f) - want) / scale;

  r.zero_mode = max_abs(em * d.p) / scale;
  r.jordan = max_abs(em * d.q + cplx(0.0, 1.0 / d.mu) * d.p) / scale;
  const cplx qp = d.q.dot(eta * d.p);
  const cplx qq = d.q.dot(eta * d.q);
  const cplx qmq = d.q.dot(m0 * d.q);
  r.pq_norm = std::max({std::abs(qp - cplx(0.0, 1.0)), std::abs(qq), std::abs(qmq - 1.0 / d.mu)});

  r.projector_idempotent = max_abs(d.projector * d.projector - d.projector);
  r.projector_kills_pq = std::max(max_abs(d.projector * d.p), max_abs(d.projector * d.q));
  r.uniform_kernel = ((quad.a + quad.b) * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() / scale;
  return r;
}

// Power-law couplings on a random rectangle (2 <= N <= 16), boundary and exponent drawn at
// random, and on odd draws every bond rescaled by an independent factor in [0.5, 1.5] so
// the lattice symmetries (and their degeneracies) are broken. All bonds stay positive.
// A fixed boundary replaces the drawn one without changing the random sequence.
inline CouplingMatrix random_connected_couplings(std::mt19937_64& rng, int draw,
                                                 std::optional<Boundary> boundary = std::nullopt) {
  std::uniform_int_distribution<int> side(1, 4);
  std::uniform_real_distribution<double> exponent(0.5, 6.0);
  std::uniform_real_distribution<double> factor(0.5, 1.5);
  LatticeSpec spec;
  do {
    spec.lx = side(rng);
    spec.ly = side(rng);
  } while (spec.n_sites() < 2);
  spec.boundary = (rng() & 1U) ? Boundary::Open : Boundary::Periodic;
  if (boundary) spec.boundary = *boundary;
  spec.alpha = exponent(rng);
  CouplingMatrix c = build_couplings(spec);
  if (draw % 2 == 1) {
    const int n = c.n_sites();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double g = factor(rng);
        c.values(i, j) *= g;
        c.values(j, i) *= g;
      }
    }
  }
  return c;
}

}  // namespace rsw::testing
