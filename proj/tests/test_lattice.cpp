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

#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "rsw/lattice.hpp"

namespace rsw {
namespace {

LatticeSpec square(int l, Boundary b, double alpha = 3.0) { return LatticeSpec{l, l, b, alpha, 1.0}; }

TEST(Lattice, TwoSiteOpenPair) {
  const CouplingMatrix c = build_couplings(LatticeSpec{2, 1, Boundary::Open});
  EXPECT_DOUBLE_EQ(c(0, 1), 4.0);
  EXPECT_DOUBLE_EQ(c(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(collective_chi(c), 4.0);
}

TEST(Lattice, TransposedStripsAgree) {
  const CouplingMatrix a = build_couplings(LatticeSpec{3, 1, Boundary::Open});
  const CouplingMatrix b = build_couplings(LatticeSpec{1, 3, Boundary::Open});
  EXPECT_EQ((a.values - b.values).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Lattice, RejectsDegenerateSpecs) {
  EXPECT_THROW(build_couplings(LatticeSpec{1, 1, Boundary::Open}), std::invalid_argument);
  EXPECT_THROW(build_couplings(LatticeSpec{0, 3, Boundary::Open}), std::invalid_argument);
  EXPECT_THROW(build_couplings(LatticeSpec{2, 2, Boundary::Open, -1.0}), std::invalid_argument);
}

TEST(Lattice, MinimumImageMatchesBruteForce) {
  const LatticeSpec spec = square(4, Boundary::Periodic);
  const CouplingMatrix c = build_couplings(spec);
  // (0,0) to (2,0): all images at distance >= 2
  EXPECT_NEAR(c(0, 2), 0.5, 1e-15);
  for (int i = 0; i < spec.n_sites(); ++i) {
    for (int j = 0; j < spec.n_sites(); ++j) {
      if (i == j) continue;
      const auto pi = spec.position(i);
      const auto pj = spec.position(j);
      double best = 1e300;
      for (int sx = -2; sx <= 2; ++sx) {
        for (int sy = -2; sy <= 2; ++sy) {
          const double dx = pj[0] - pi[0] + sx * spec.lx;
          const double dy = pj[1] - pi[1] + sy * spec.ly;
          best = std::min(best, std::hypot(dx, dy));
        }
      }
      EXPECT_NEAR(c(i, j), 4.0 * std::pow(best, -3.0), 1e-12);
    }
  }
}

TEST(Lattice, ExactlySymmetric) {
  for (Boundary b : {Boundary::Periodic, Boundary::Open}) {
    const CouplingMatrix c = build_couplings(LatticeSpec{5, 3, b, 2.3});
    for (int i = 0; i < c.n_sites(); ++i) {
      EXPECT_EQ(c(i, i), 0.0);
      for (int j = 0; j < c.n_sites(); ++j) {
        EXPECT_EQ(c(i, j), c(j, i));
        if (i != j) EXPECT_GT(c(i, j), 0.0);
      }
    }
  }
}

TEST(Lattice, PeriodicRowSumsAreUniform) {
  const CouplingMatrix c = build_couplings(LatticeSpec{4, 3, Boundary::Periodic});
  const double r0 = c.row_sum(0);
  for (int i = 1; i < c.n_sites(); ++i) EXPECT_NEAR(c.row_sum(i), r0, 1e-12 * r0);
}

TEST(Lattice, ChiBruteForceAndScaling) {
  const LatticeSpec spec = square(3, Boundary::Periodic);
  const CouplingMatrix c = build_couplings(spec);
  double pairs = 0.0;
  for (int i = 0; i < 9; ++i) {
    for (int j = i + 1; j < 9; ++j) pairs += c(i, j);
  }
  EXPECT_NEAR(collective_chi(c), 2.0 * pairs / (8.0 * 9.0), 1e-14);

  LatticeSpec scaled = spec;
  scaled.coupling = 2.5;
  EXPECT_NEAR(collective_chi(build_couplings(scaled)), 2.5 * collective_chi(c), 1e-12);
}

TEST(Lattice, OpenChiBelowPeriodic) {
  // at L = 2 the minimum image adds nothing
  EXPECT_NEAR(collective_chi(build_couplings(square(2, Boundary::Open))),
              collective_chi(build_couplings(square(2, Boundary::Periodic))), 1e-14);
  for (int l : {3, 4, 5}) {
    EXPECT_LT(collective_chi(build_couplings(square(l, Boundary::Open))),
              collective_chi(build_couplings(square(l, Boundary::Periodic))));
  }
}

TEST(Lattice, FourierZeroIsRowSum) {
  const LatticeSpec spec = square(4, Boundary::Periodic);
  const CouplingMatrix c = build_couplings(spec);
  EXPECT_NEAR(fourier_coupling(c, spec, {0.0, 0.0}), c.row_sum(0), 1e-12);
}

TEST(Lattice, FourierMatchesDoubleSum) {
  const LatticeSpec spec = square(4, Boundary::Periodic);
  const CouplingMatrix c = build_couplings(spec);
  const std::array<double, 2> q{M_PI, 0.0};
  std::complex<double> sum = 0.0;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      const auto ri = spec.position(i);
      const auto rj = spec.position(j);
      const double phase = q[0] * (ri[0] - rj[0]) + q[1] * (ri[1] - rj[1]);
      sum += std::polar(c(i, j), phase);
    }
  }
  sum /= 16.0;
  EXPECT_LT(std::abs(sum.imag()), 1e-12);
  EXPECT_NEAR(fourier_coupling(c, spec, q), sum.real(), 1e-12);
}

TEST(Lattice, FourierInversionSymmetricAndReconstructs) {
  const LatticeSpec spec{4, 3, Boundary::Periodic};
  const CouplingMatrix c = build_couplings(spec);
  Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(12, 12);
  for (int kx = 0; kx < spec.lx; ++kx) {
    for (int ky = 0; ky < spec.ly; ++ky) {
      const auto q = grid_momentum(spec, kx, ky);
      const auto qm = grid_momentum(spec, (spec.lx - kx) % spec.lx, (spec.ly - ky) % spec.ly);
      const double jq = fourier_coupling(c, spec, q);
      EXPECT_NEAR(jq, fourier_coupling(c, spec, qm), 1e-12);
      for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 12; ++j) {
          const auto ri = spec.position(i);
          const auto rj = spec.position(j);
          rebuilt(i, j) += jq * std::cos(q[0] * (ri[0] - rj[0]) + q[1] * (ri[1] - rj[1])) / 12.0;
        }
      }
    }
  }
  EXPECT_LT((rebuilt - c.values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Lattice, FourierRejectsOpenAndOffGrid) {
  const LatticeSpec open = square(3, Boundary::Open);
  EXPECT_THROW(fourier_coupling(build_couplings(open), open, {0.0, 0.0}), std::invalid_argument);
  const LatticeSpec pbc = square(3, Boundary::Periodic);
  EXPECT_THROW(fourier_coupling(build_couplings(pbc), pbc, {0.3, 0.0}), std::invalid_argument);
}

TEST(Lattice, RowMajorIndexing) {
  const LatticeSpec spec{4, 3, Boundary::Open};
  EXPECT_EQ(spec.position(5), (std::array<int, 2>{1, 1}));
  EXPECT_EQ(spec.position(11), (std::array<int, 2>{3, 2}));
}

}  // namespace
}  // namespace rsw
