# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Pytest configuration for equiform_core tests
"""

import json
import math

import pytest

from equiform_core.config import CONFIG
from equiform_core.motion import MotionParams, block_rotation_instance


@pytest.fixture(autouse=True)
def testing_config():
    """Testing mode (scan workers re-raise) and default numerics for every test."""
    saved_mode = CONFIG.mode
    saved_tolerance = CONFIG.numerics.tolerance
    saved_restarts = CONFIG.search.restarts
    CONFIG.set_mode("testing")
    yield CONFIG
    CONFIG.mode = saved_mode
    CONFIG.numerics.tolerance = saved_tolerance
    CONFIG.search.restarts = saved_restarts


@pytest.fixture
def pure_scaling():
    """s' = 1 only: the cone over the sphere, K = 0."""
    return MotionParams.build(1)


@pytest.fixture
def pure_rotation():
    """omega_3 = omega_9 = omega_15 = 1: the warped product dt^2 + (1 + t^2) g_S2, K = 2 at t = 0."""
    return block_rotation_instance(1, 0, 0)


@pytest.fixture
def pure_translation():
    """b'_6 = 1 only, K = -2."""
    return block_rotation_instance(0, 1, 0)


@pytest.fixture
def block111():
    return block_rotation_instance(1, 1, 1)


@pytest.fixture
def block211():
    """beta = 1, delta = 5/2, K = 1."""
    return block_rotation_instance(2, 1, 1)


@pytest.fixture
def block121():
    """K = 2(1 - 4)/6 = -1."""
    return block_rotation_instance(1, 2, 1)


@pytest.fixture
def sqrt10_instance():
    """KNeg32B member: 3 s'^2 + 7 |omega|^2 = b'^2 with b'_6 = sqrt(10)."""
    return MotionParams.build(1.0, {3: 1.0, 9: 1.0, 15: 1.0}, {6: math.sqrt(10.0)})


@pytest.fixture
def write_params(tmp_path):
    """Write a parameter dict to a JSON file and return its path."""
    def _write(data, name="params.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)
    return _write


@pytest.fixture
def block211_json():
    return {
        "s_prime": "1",
        "omega": [0, 0, "2", 0, 0, 0, 0, 0, "2", 0, 0, 0, 0, 0, "2", 0, 0, 0, 0, 0, 0],
        "d_prime": [0, 0, 0, 0, 0, "1", 0],
    }
