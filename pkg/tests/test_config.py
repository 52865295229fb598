"""Unit tests for settings precedence."""

from __future__ import annotations

import json

import pytest

from hybrid_ser.config import env_name, load_config, resolve


def test_load_config_normalises_keys(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"batch-size": 32, "seed": 4}))
    assert load_config(path) == {"batch_size": 32, "seed": 4}


def test_load_config_none_and_non_object(tmp_path):
    assert load_config(None) == {}
    path = tmp_path / "c.json"
    path.write_text("[1, 2]")
    with pytest.raises(ValueError):
        load_config(path)


def test_env_name():
    assert env_name("log_level") == "HYBRID_SER_LOG_LEVEL"


def test_flag_beats_everything(monkeypatch):
    monkeypatch.setenv("HYBRID_SER_SEED", "9")
    assert resolve("seed", 1, {"seed": 2}, 0, int) == 1


def test_file_beats_environment(monkeypatch):
    monkeypatch.setenv("HYBRID_SER_SEED", "9")
    assert resolve("seed", None, {"seed": "2"}, 0, int) == 2


def test_environment_beats_default(monkeypatch):
    monkeypatch.setenv("HYBRID_SER_WORKERS", "6")
    assert resolve("workers", None, {}, 1, int) == 6


def test_environment_only_for_known_keys(monkeypatch):
    monkeypatch.setenv("HYBRID_SER_EPOCHS", "3")
    assert resolve("epochs", None, {}, 128, int) == 128


def test_default_when_unset(monkeypatch):
    monkeypatch.delenv("HYBRID_SER_SEED", raising=False)
    assert resolve("seed", None, {"seed": None}, 0, int) == 0
