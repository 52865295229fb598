"""Shared fixtures: small map geometries and seeded generators."""

from __future__ import annotations

import numpy as np
import pytest

from hybrid_ser.featuremap import FeatureMapSpec
from hybrid_ser.hpss import HpssConfig


def pytest_addoption(parser):
    """Register ``--run-slow`` for the full-size runs in tests/integration/."""
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run the full-size end-to-end tests in tests/integration/ (minutes of CPU).",
    )


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

@pytest.fixture
def small_spec() -> FeatureMapSpec:
    """32x32 maps at 8 kHz with a 256-sample window: 8192-sample subsamples."""
    return FeatureMapSpec(bands=32, frames=32, sample_rate=8000, window_size=256)


@pytest.fixture
def small_hpss() -> HpssConfig:
    return HpssConfig(kernel_time=9, kernel_freq=9)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
