# Copyright 2026 The telepovm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Few-qubit POVM, ensemble and teleportation simulator."""

import json as _json

from ._core import (
    TelepovmError,
    b92_demo,
    bell_projectors,
    conclusive_probability,
    enumerate_branches,
    generate_at_distance,
    induced_povm,
    partial_trace,
    schmidt_decompose,
    telepovm_elements,
    usd_povm,
    validate_povm,
)
from . import _core


def run_experiment(protocol, **kwargs):
    """Runs one experiment and returns the report as a dict (no timestamp)."""
    return _json.loads(_core.run_experiment_json(protocol, **kwargs))


def run_verification_suite(seed=1, inject_fault=False):
    return _json.loads(_core.run_verification_suite_json(seed, inject_fault))


__all__ = [
    "TelepovmError",
    "b92_demo",
    "bell_projectors",
    "conclusive_probability",
    "enumerate_branches",
    "generate_at_distance",
    "induced_povm",
    "partial_trace",
    "run_experiment",
    "run_verification_suite",
    "schmidt_decompose",
    "telepovm_elements",
    "usd_povm",
    "validate_povm",
]
