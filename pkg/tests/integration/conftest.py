"""Shared setup for the full-size end-to-end runs.

These tests generate a synthetic corpus, run the whole pipeline at the
default geometry (128x128 maps at 88.2 kHz) and train the full network.
They are skipped unless enabled (checked in order):

1. ``pytest --run-slow``
2. ``HYBRID_SER_RUN_SLOW=1`` environment variable
"""

from __future__ import annotations

import os
from pathlib import Path

import pytest

SCRIPT_DIR = Path(__file__).resolve().parent


def _slow_enabled(config) -> bool:
    if config.getoption("--run-slow", default=False):
        return True
    return os.environ.get("HYBRID_SER_RUN_SLOW", "") not in ("", "0")


# --run-slow is registered in tests/conftest.py so it is available when running pytest from repo root.

def pytest_collection_modifyitems(config, items):
    """Auto-skip only tests in this directory unless slow runs are enabled."""
    if _slow_enabled(config):
        return
    skip = pytest.mark.skip(reason="full-size run; enable with --run-slow or HYBRID_SER_RUN_SLOW=1")
    for item in items:
        path = getattr(item, "path", None) or getattr(item, "fspath", None)
        if path is None:
            continue
        if Path(path).resolve().is_relative_to(SCRIPT_DIR):
            item.add_marker(skip)


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """200-clip synthetic corpus; returns ``(manifest_path, rows)``."""
    from hybrid_ser.synthetic import generate_corpus

    return generate_corpus(tmp_path_factory.mktemp("corpus"), clips=200, seed=7)
