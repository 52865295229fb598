"""Summaries over batch extraction results and sweep accuracies.

:func:`collect_maps` skips results with ``success=False``;
:func:`failure_report` lists them.
"""

from __future__ import annotations

import statistics as _stats
from collections import Counter
from typing import Any, Sequence

from hybrid_ser.featuremap import EmotionLabel, FeatureMap
from hybrid_ser.pool import FileResult


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------

def collect_maps(results: Sequence[FileResult]) -> list[FeatureMap]:
    """All maps from successful results, in result order."""
    return [m for r in results if r.success for m in r.maps]


def class_counts(maps: Sequence[FeatureMap]) -> dict[str, int]:
    """Map count per emotion name, every class listed, plus ``unlabeled`` if any."""
    counts = Counter(m.label for m in maps)
    out = {c.name.lower(): counts.get(c, 0) for c in EmotionLabel}
    if counts.get(None):
        out["unlabeled"] = counts[None]
    return out


# ---------------------------------------------------------------------------
# Numeric
# ---------------------------------------------------------------------------

def statistics(values: Sequence[float]) -> dict[str, float]:
    """Summary statistics over e.g. the accuracies of a sweep.

    Returns dict with keys ``mean``, ``std``, ``median``, ``min``, ``max``.
    """
    if not values:
        return {"mean": 0.0, "std": 0.0, "median": 0.0, "min": 0.0, "max": 0.0}
    return {
        "mean": _stats.mean(values),
        "std": _stats.stdev(values) if len(values) > 1 else 0.0,
        "median": _stats.median(values),
        "min": min(values),
        "max": max(values),
    }


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def failure_report(results: Sequence[FileResult]) -> dict[str, Any]:
    """Return a diagnostic summary of successes and failures.

    Keys: ``total``, ``success_count``, ``failure_count``, ``failures``
    (list of ``{index, source, error}`` dicts).
    """
    total = len(results)
    failures = [
        {"index": r.index, "source": r.source, "error": r.error}
        for r in results
        if not r.success
    ]
    return {
        "total": total,
        "success_count": total - len(failures),
        "failure_count": len(failures),
        "failures": failures,
    }
