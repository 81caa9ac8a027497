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

#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "rsw/error.hpp"
#include "rsw/spinwave.hpp"

namespace rsw {

namespace {

using cplx = std::complex<double>;

Eigen::MatrixXd symmetric_power(const Eigen::MatrixXd& m, double power, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  if (ev.minCoeff() <= 0.0) {
    throw DecompositionError(std::string(what) + " is not positive definite");
  }
  return solver.eigenvectors() * ev.array().pow(power).matrix().asDiagonal() *
         solver.eigenvectors().transpose();
}

// Flip the sign so the largest-magnitude entry is real positive (for real vectors).
void fix_sign(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v(idx).real() < 0.0) v = -v;
}

}  // namespace

Eigen::MatrixXd BdgDecomposition::eta_tilde() const {
  Eigen::VectorXd diag(2 * n_sites);
  diag(0) = 1.0;
  diag(1) = -1.0;
  diag.segment(2, n_sites - 1).setOnes();
  diag.segment(n_sites + 1, n_sites - 1).setConstant(-1.0);
  return diag.asDiagonal();
}

Eigen::MatrixXcd BdgDecomposition::t_inverse() const {
  return eta_tilde() * t.adjoint() * nambu_eta(n_sites);
}

BdgDecomposition bdg_decompose(const QuadraticHamiltonian& quad, const BdgOptions& options) {
  if (quad.h != 0.0) throw std::invalid_argument("bdg_decompose expects the zero-field Hamiltonian");
  const int n = quad.n_sites();
  if (n < 2) throw std::invalid_argument("bdg_decompose needs at least 2 sites");

  // With x = u + v and y = u - v the eigenproblem eta M0 (u, v) = omega (u, v) becomes
  // X x = omega y, Y y = omega x (X = A + B, Y = A - B), i.e. the symmetric problem
  // Y^1/2 X Y^1/2 z = omega^2 z with x = Y^1/2 z. Y is the diagonal of row sums here.
  const Eigen::MatrixXd x_mat = quad.a + quad.b;
  const Eigen::MatrixXd y_mat = quad.a - quad.b;
  const Eigen::MatrixXd y_half = symmetric_power(y_mat, 0.5, "A - B");
  const Eigen::MatrixXd y_inv_half = symmetric_power(y_mat, -0.5, "A - B");
  Eigen::MatrixXd reduced = y_half * x_mat * y_half;
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced);
  const Eigen::VectorXd& w2 = solver.eigenvalues();
  const Eigen::MatrixXd& z = solver.eigenvectors();

  const double w2_max = w2.maxCoeff();
  int zero_count = 0;
  for (Eigen::Index k = 0; k < w2.size(); ++k) {
    if (w2(k) < -options.zero_mode_tol * w2_max) {
      throw DecompositionError("BdG matrix is not positive semidefinite (omega^2 = " +
                               std::to_string(w2(k)) + ")");
    }
    if (w2(k) < options.zero_mode_tol * w2_max) ++zero_count;
  }
  if (zero_count != 1) {
    throw DecompositionError("expected exactly one zero mode, found " + std::to_string(zero_count) +
                             " (disconnected lattice?)");
  }

  BdgDecomposition out;
  out.n_sites = n;
  out.m0 = quad.bdg_matrix();
  const Eigen::MatrixXd eta = nambu_eta(n);
  const Eigen::MatrixXd gamma = nambu_gamma(n);

  // Zero mode: x0 spans ker X; P = -i (x0, x0) / |.|, Q solves eta M0 Q = -(i / mu) P.
  Eigen::VectorXd x0 = y_half * z.col(0);
  if (x0.sum() < 0.0) x0 = -x0;
  x0 /= std::sqrt(2.0) * x0.norm();
  out.p.resize(2 * n);
  out.p << x0.cast<cplx>(), x0.cast<cplx>();
  out.p *= cplx(0.0, -1.0);
  // eta M0 Q0 = -i P = -(x0, x0): x_Q = 0 and Y y_Q = -2 x0.
  const Eigen::VectorXd y_q = y_mat.ldlt().solve(-2.0 * x0);
  Eigen::VectorXd q0(2 * n);
  q0 << 0.5 * y_q, -0.5 * y_q;
  out.mu = q0.dot(out.m0 * q0);
  if (!(out.mu > 0.0)) throw DecompositionError("zero-mode mass constant is not positive");
  out.q = (q0 / out.mu).cast<cplx>();

  // Finite modes, raw normalization V^+ eta V = omega.
  const int n_finite = n - 1;
  out.frequencies.resize(n_finite);
  Eigen::MatrixXcd raw(2 * n, n_finite);
  for (int k = 0; k < n_finite; ++k) {
    const double omega = std::sqrt(w2(k + 1));
    out.frequencies(k) = omega;
    const Eigen::VectorXd xv = y_half * z.col(k + 1);
    const Eigen::VectorXd yv = omega * (y_inv_half * z.col(k + 1));
    raw.col(k) << (0.5 * (xv + yv)).cast<cplx>(), (0.5 * (xv - yv)).cast<cplx>();
  }

  // Gram canonicalization per degenerate sector: G = S+^ eta S+, S+ <- S+ G^-1/2.
  const double omega_max = out.frequencies.maxCoeff();
  Eigen::MatrixXcd v_block(2 * n, n_finite);
  for (int start = 0; start < n_finite;) {
    int end = start + 1;
    while (end < n_finite &&
           out.frequencies(end) - out.frequencies(start) <= options.degeneracy_tol * omega_max) {
      ++end;
    }
    const int size = end - start;
    out.sector_sizes.push_back(size);
    const Eigen::MatrixXcd s_plus = raw.middleCols(start, size);
    Eigen::MatrixXcd gram = s_plus.adjoint() * eta * s_plus;
    gram = 0.5 * (gram + gram.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gsolver(gram);
    if (gsolver.eigenvalues().minCoeff() < options.gram_floor) {
      throw DecompositionError("Gram matrix of a degenerate sector is not positive definite (omega = " +
                               std::to_string(out.frequencies(start)) + ")");
    }
    const Eigen::MatrixXcd g_inv_half = gsolver.eigenvectors() *
                                        gsolver.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                        gsolver.eigenvectors().adjoint();
    v_block.middleCols(start, size) = s_plus * g_inv_half;
    if (size == 1) fix_sign(v_block.col(start));
    start = end;
  }
  const Eigen::MatrixXcd w_block = gamma * v_block.conjugate();

  const cplx i_unit(0.0, 1.0);
  const Eigen::VectorXcd v0 = (out.p + i_unit * out.q) / std::sqrt(2.0);
  const Eigen::VectorXcd w0 = -(out.p - i_unit * out.q) / std::sqrt(2.0);

  out.t.resize(2 * n, 2 * n);
  out.t.col(0) = v0;
  out.t.col(1) = w0;
  out.t.middleCols(2, n_finite) = v_block;
  out.t.middleCols(2 + n_finite, n_finite) = w_block;

  out.t_s.resize(2 * n, 2 * n_finite);
  out.t_s << v_block, w_block;
  Eigen::VectorXd eta_s(2 * n_finite);
  eta_s << Eigen::VectorXd::Ones(n_finite), -Eigen::VectorXd::Ones(n_finite);
  out.t_s_inverse = eta_s.asDiagonal() * out.t_s.adjoint() * eta;
  out.projector = out.t_s * out.t_s_inverse;
  return out;
}

ObcCovariance ObcCovariance::vacuum(int n_sites) {
  ObcCovariance c;
  c.matrix = Eigen::MatrixXcd::Zero(2 * n_sites, 2 * n_sites);
  c.matrix.topLeftCorner(n_sites, n_sites).setIdentity();
  return c;
}

namespace {

// Caches exp(-i G(h) tau) for the constant-field stretches of one run.
template <class Generator>
class PropagatorCache {
 public:
  explicit PropagatorCache(Generator gen) : gen_(std::move(gen)) {}
  const Eigen::MatrixXcd& get(double h, double tau) {
    const auto key = std::make_pair(std::bit_cast<std::uint64_t>(h), std::bit_cast<std::uint64_t>(tau));
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      const Eigen::MatrixXcd g = cplx(0.0, -tau) * gen_(h);
      it = cache_.emplace(key, g.exp()).first;
    }
    return it->second;
  }

 private:
  Generator gen_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Eigen::MatrixXcd> cache_;
};

// The reassembled D carries the frozen -D_S(0) block and need not be positive; the
// evolved spin-wave part must be.
void check_positivity(const Eigen::MatrixXcd& spin_wave, double t) {
  const int n = static_cast<int>(spin_wave.rows() / 2);
  Eigen::MatrixXcd d = spin_wave.bottomRightCorner(n, n);
  d = 0.5 * (d + d.adjoint()).eval();
  const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(d, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .minCoeff();
  if (lowest < -1e-6) {
    throw NumericalError("spin-wave covariance lost positivity at t = " + std::to_string(t) +
                         " (lowest eigenvalue of D = " + std::to_string(lowest) + ")");
  }
}

}  // namespace

ObcSplitCovariance split_covariance(const BdgDecomposition& decomp, const ObcCovariance& cov) {
  const Eigen::MatrixXcd& proj = decomp.projector;
  ObcSplitCovariance out;
  out.spin_wave = proj * cov.matrix * proj.adjoint();
  out.frozen = cov.matrix - out.spin_wave;
  return out;
}

Eigen::MatrixXcd obc_segment_propagator(const BdgDecomposition& decomp, double h, double tau) {
  const int n = decomp.n_sites;
  const Eigen::MatrixXd eta = nambu_eta(n);
  const Eigen::MatrixXcd& proj = decomp.projector;
  const Eigen::MatrixXcd k =
      proj * (eta * (decomp.m0 + h * Eigen::MatrixXd::Identity(2 * n, 2 * n))).cast<cplx>() * proj;
  const Eigen::MatrixXcd g = cplx(0.0, -tau) * k;
  return g.exp();
}

ObcTrajectory evolve_obc_covariance(const BdgDecomposition& decomp, const ControlField& field,
                                    const std::vector<double>& times) {
  field.validate();
  ObcSplitCovariance state = split_covariance(decomp, ObcCovariance::vacuum(decomp.n_sites));
  PropagatorCache cache([&](double h) -> Eigen::MatrixXcd {
    const int n = decomp.n_sites;
    const Eigen::MatrixXd eta = nambu_eta(n);
    return decomp.projector *
           (eta * (decomp.m0 + h * Eigen::MatrixXd::Identity(2 * n, 2 * n))).cast<cplx>() *
           decomp.projector;
  });

  ObcTrajectory out;
  out.times = times;
  walk_field(
      field, times,
      [&](double h, double tau) {
        const Eigen::MatrixXcd& u = cache.get(h, tau);
        state.spin_wave = u * state.spin_wave * u.adjoint();
      },
      [&](std::size_t idx) {
        check_positivity(state.spin_wave, times[idx]);
        out.states.push_back(state.total());
      });
  return out;
}

ObcTrajectory evolve_obc_covariance_beta(const BdgDecomposition& decomp, const ControlField& field,
                                         const std::vector<double>& times) {
  field.validate();
  const int n = decomp.n_sites;
  const int ns = 2 * (n - 1);
  const Eigen::MatrixXd eta = nambu_eta(n);
  const Eigen::MatrixXcd t_inv = decomp.t_inverse();

  Eigen::MatrixXcd beta_cov = t_inv * ObcCovariance::vacuum(n).matrix * t_inv.adjoint();

  PropagatorCache cache([&](double h) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd omega = t_inv * (eta * (decomp.m0 + h * Eigen::MatrixXd::Identity(2 * n, 2 * n))) * decomp.t;
    return omega.bottomRightCorner(ns, ns);
  });

  ObcTrajectory out;
  out.times = times;
  walk_field(
      field, times,
      [&](double h, double tau) {
        const Eigen::MatrixXcd& u = cache.get(h, tau);
        beta_cov.bottomRightCorner(ns, ns) = (u * beta_cov.bottomRightCorner(ns, ns) * u.adjoint()).eval();
      },
      [&](std::size_t idx) {
        const Eigen::MatrixXcd sw = decomp.t_s * beta_cov.bottomRightCorner(ns, ns) * decomp.t_s.adjoint();
        check_positivity(sw, times[idx]);
        out.states.push_back(ObcCovariance{decomp.t * beta_cov * decomp.t.adjoint()});
      });
  return out;
}

}  // namespace rsw
