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


"""Rotor/spin-wave squeezing simulator with optimal transverse-field control."""

from rswsqueeze._rsw import (  # noqa: F401
    ConfigError,
    DecompositionError,
    Error,
    InstabilityError,
    LostMeanSpinError,
    NumericalError,
    Problem,
    __version__,
    collective_chi,
    couplings,
    exact_xi_squared,
    inverse_inertia,
    run_config,
    tat_benchmark,
)


def to_db(xi_squared):
    """-10 log10 xi^2."""
    import math

    return -10.0 * math.log10(xi_squared)
