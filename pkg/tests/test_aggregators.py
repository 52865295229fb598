"""Unit tests for result aggregators."""

from __future__ import annotations

import numpy as np
import pytest

from hybrid_ser.aggregators import class_counts, collect_maps, failure_report, statistics
from hybrid_ser.featuremap import EmotionLabel, FeatureMap
from hybrid_ser.pool import FileResult


def _map(label, sid="x"):
    return FeatureMap(np.zeros((1, 2, 2)), label, sid)


def _results():
    return [
        FileResult(success=True, maps=[_map(EmotionLabel.ANGER, "a#0"), _map(EmotionLabel.ANGER, "a#1")], index=0, source="a.wav"),
        FileResult(success=False, error="MalformedHeader: nope", index=1, source="b.wav"),
        FileResult(success=True, maps=[_map(None, "c#0")], index=2, source="c.wav"),
    ]


def test_collect_maps_skips_failures():
    assert [m.source_id for m in collect_maps(_results())] == ["a#0", "a#1", "c#0"]


def test_class_counts_lists_every_class():
    counts = class_counts(collect_maps(_results()))
    assert counts["anger"] == 2
    assert counts["sadness"] == 0
    assert counts["unlabeled"] == 1
    assert len(counts) == 8


def test_class_counts_omits_unlabeled_when_absent():
    assert "unlabeled" not in class_counts([_map(EmotionLabel.FEAR)])


def test_statistics():
    s = statistics([0.5, 0.7, 0.9])
    assert s["mean"] == pytest.approx(0.7)
    assert s["median"] == 0.7
    assert (s["min"], s["max"]) == (0.5, 0.9)
    assert s["std"] == pytest.approx(0.2)
    assert statistics([])["mean"] == 0.0
    assert statistics([0.4])["std"] == 0.0


def test_failure_report():
    report = failure_report(_results())
    assert (report["total"], report["success_count"], report["failure_count"]) == (3, 2, 1)
    assert report["failures"] == [{"index": 1, "source": "b.wav", "error": "MalformedHeader: nope"}]
