"""
Pytest configuration and fixtures for qubit-channel-roofs testing.
Provides seeded generators, named channels, and small oracle budgets.
"""

import pytest
import os
import json

import numpy as np

# Import core modules
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

os.environ.setdefault("ENVIRONMENT", "test")

from channels import degenerate_channel, depolarizing, identity_channel
from config import TestConfig
from oracle import OracleConfig
from seed_data import make_rng


@pytest.fixture(scope="session")
def test_config():
    """
    Provides test configuration.
    """
    return TestConfig()


@pytest.fixture
def rng():
    """
    Fresh seeded generator per test so every run draws the same samples.
    """
    return make_rng(20240607)


@pytest.fixture
def degenerate_half():
    """
    Degenerate channel at t = 1/2.
    """
    return degenerate_channel(0.5)


@pytest.fixture
def identity():
    """
    Identity channel.
    """
    return identity_channel()


@pytest.fixture
def depolarizing_half():
    """
    Depolarizing channel with s = 0.5 (Kraus span of dimension four).
    """
    return depolarizing(0.5)


@pytest.fixture
def small_oracle():
    """
    Reduced oracle budget for fast tests.
    """
    return OracleConfig(restarts=4, grid=24, seed=7, refine_iters=120)


@pytest.fixture
def full_oracle():
    """
    Default oracle budget used by the slow property runs.
    """
    return OracleConfig(restarts=16, grid=64, seed=42, refine_iters=200)


@pytest.fixture
def channel_file(tmp_path):
    """
    Writes a channel JSON file and returns its path.
    """
    def _write(kraus, name=None):
        doc = {"kraus": [[[[float(np.real(v)), float(np.imag(v))] for v in row] for row in k] for k in kraus]}
        if name:
            doc["name"] = name
        path = tmp_path / f"{name or 'channel'}.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)

    return _write
