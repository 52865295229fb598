"""Unit tests for concurrent extraction."""

from __future__ import annotations

import asyncio

import pytest

from hybrid_ser.featuremap import EmotionLabel
from hybrid_ser.manifest import ManifestRow
from hybrid_ser.pool import ExtractionPool, FileResult, extract_file, run_extraction
from tests.helpers import sine, write_pcm16


@pytest.fixture
def rows(tmp_path):
    out = []
    for i, seconds in enumerate((0.5, 1.5, 2.5)):
        path = write_pcm16(tmp_path / f"clip{i}.wav", sine(200.0 * (i + 1), seconds, 8000), 8000)
        out.append(ManifestRow(path, EmotionLabel(i)))
    return out


def test_extract_file_names_maps_after_stem(rows, small_spec, small_hpss):
    maps = extract_file(rows[1], small_spec, small_hpss)
    assert [m.source_id for m in maps] == ["clip1#0", "clip1#1"]
    assert all(m.label is EmotionLabel.BOREDOM for m in maps)


def test_pool_rejects_zero_concurrency(small_spec):
    with pytest.raises(ValueError):
        ExtractionPool(small_spec, concurrency=0)


@pytest.mark.asyncio
async def test_extract_all_keeps_input_order(rows, small_spec, small_hpss):
    pool = ExtractionPool(small_spec, small_hpss, concurrency=3)
    results = await pool.extract_all(rows)
    assert [r.index for r in results] == [0, 1, 2]
    assert [len(r.maps) for r in results] == [1, 2, 3]
    assert all(r.success for r in results)


@pytest.mark.asyncio
async def test_failures_are_captured(rows, small_spec, small_hpss, tmp_path):
    bad = tmp_path / "bad.wav"
    bad.write_bytes(b"not audio")
    missing = ManifestRow(tmp_path / "missing.wav", EmotionLabel.FEAR)
    pool = ExtractionPool(small_spec, small_hpss, concurrency=2)
    results = await pool.extract_all([rows[0], ManifestRow(bad, EmotionLabel.ANGER), missing])
    assert [r.success for r in results] == [True, False, False]
    assert results[1].error.startswith("MalformedHeader:")
    assert results[2].error.startswith("FileNotFoundError:")
    assert results[1].source == str(bad)


@pytest.mark.asyncio
async def test_semaphore_bounds_concurrency(rows, small_spec, small_hpss, monkeypatch):
    import hybrid_ser.pool as pool_mod

    active = 0
    peak = 0

    async def fake_to_thread(fn, *args):
        nonlocal active, peak
        active += 1
        peak = max(peak, active)
        await asyncio.sleep(0.01)
        active -= 1
        return []

    monkeypatch.setattr(pool_mod.asyncio, "to_thread", fake_to_thread)
    results = await ExtractionPool(small_spec, small_hpss, concurrency=2).extract_all(rows * 3)
    assert peak == 2
    assert len(results) == 9


def test_run_extraction_is_synchronous_wrapper(rows, small_spec, small_hpss):
    results = run_extraction(rows, small_spec, small_hpss, concurrency=2)
    assert all(isinstance(r, FileResult) for r in results)
    assert sum(len(r.maps) for r in results) == 6


def test_run_extraction_is_deterministic_across_workers(rows, small_spec, small_hpss):
    one = run_extraction(rows, small_spec, small_hpss, concurrency=1)
    many = run_extraction(rows, small_spec, small_hpss, concurrency=3)
    assert [m for r in one for m in r.maps] == [m for r in many for m in r.maps]
