# Copyright 2026 The rswsqueeze Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import math

import numpy as np
import pytest

import rswsqueeze as rs


def ku_wineland(n, chi_t):
    a = 1.0 - math.cos(2 * chi_t) ** (n - 2)
    b = 4.0 * math.sin(chi_t) * math.cos(chi_t) ** (n - 2)
    k = 1.0 + 0.25 * (n - 1) * (a - math.sqrt(a * a + b * b))
    return k / math.cos(chi_t) ** (2 * (n - 1))


def test_couplings_shape_and_symmetry():
    j = rs.couplings(4, 4)
    assert j.shape == (16, 16)
    assert np.allclose(j, j.T)
    assert np.all(np.diag(j) == 0)
    # (0,0)-(2,0) under minimum image: 4 / 2^3
    assert j[0, 2] == pytest.approx(0.5)
    assert rs.inverse_inertia(j) == pytest.approx(rs.collective_chi(j) / 2)


def test_css_starts_unsqueezed():
    for boundary in ("periodic", "open"):
        p = rs.Problem(3, 3, boundary)
        tr = p.trajectory(0.5, [0.0, 1.0], [0.0])
        assert tr["xi_squared"][0] == pytest.approx(1.0, abs=1e-9)


def test_never_beats_oat():
    p = rs.Problem(2, 4)
    chi = p.inverse_inertia
    times = [0.05, 0.1, 0.2]
    tr = p.trajectory(0.2, [0.0], times)
    # spin waves only ever reduce the mean spin, so RSW is never better than OAT
    for t, xi2 in zip(times, tr["xi_squared"]):
        assert xi2 >= ku_wineland(8, chi * t) * (1 - 1e-9)


def test_optimized_field_squeezes_exactly():
    p = rs.Problem(2, 4)
    r = p.optimize(1.0, [0.0] * 16, max_iterations=80, random_starts=1, seed=3)
    assert r["xi_db"] > 0
    exact = rs.exact_xi_squared(p.couplings, 1.0, r["segments"], [1.0])[0]
    assert rs.to_db(exact) > 3.0
    assert p.objective(1.0, r["segments"]) == pytest.approx(r["xi_squared"])


def test_tat_benchmark():
    xi2, t = rs.tat_benchmark(16, 1.0, list(np.linspace(0, 3, 3001)))
    assert 0 < xi2 < 1 and 0 < t < 3


def test_run_config_and_errors():
    text = "schema_version: 1\nmode: simulate\nlattice: {lx: 2, ly: 2}\nfield: {total_time: 0.5}\ntime_grid: {samples: 5}\n"
    files = rs.run_config(text)
    assert "trajectory.csv" in files
    assert files == rs.run_config(text)
    assert files != rs.run_config(text, seed=4)
    with pytest.raises(rs.ConfigError, match=r"<config>:3:"):
        rs.run_config("schema_version: 1\nmode: simulate\nlattice: {lx: -2, ly: 2}\nfield: {total_time: 0.5}\n")
    with pytest.raises(ValueError):
        rs.Problem(2, 2, "twisted")
