"""Accuracy, confusion matrices and report export."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from hybrid_ser.classifier.mlp import MlpModel, predict
from hybrid_ser.featuremap import EmotionLabel

ALL_CLASSES: tuple[EmotionLabel, ...] = tuple(EmotionLabel)


@dataclass(frozen=True, eq=False)
class EvalReport:
    """Test-set metrics over all seven classes.

    ``confusion[i, j]`` is the percentage of class-``i`` examples predicted
    as class ``j``; rows of classes without examples are zero.
    """

    accuracy: float
    per_class_accuracy: np.ndarray
    confusion: np.ndarray
    counts: np.ndarray
    classes: tuple[EmotionLabel, ...] = ALL_CLASSES

    def to_dict(self) -> dict[str, Any]:
        names = [c.name.lower() for c in EmotionLabel]
        return {
            "accuracy": float(self.accuracy),
            "classes": [c.name.lower() for c in self.classes],
            "counts": {n: int(k) for n, k in zip(names, self.counts)},
            "per_class_accuracy": {n: float(a) for n, a in zip(names, self.per_class_accuracy)},
            "confusion_percent": [[float(v) for v in row] for row in self.confusion],
            "labels": names,
        }


def confusion_report(
    y_true: Sequence[int] | np.ndarray,
    y_pred: Sequence[int] | np.ndarray,
    classes: Sequence[EmotionLabel] | None = None,
) -> EvalReport:
    """Build an :class:`EvalReport` from true and predicted class indices."""
    y_true = np.asarray(y_true, dtype=np.intp)
    y_pred = np.asarray(y_pred, dtype=np.intp)
    if y_true.size == 0:
        raise ValueError("cannot evaluate an empty test set")
    k = len(EmotionLabel)
    raw = np.zeros((k, k), dtype=np.int64)
    np.add.at(raw, (y_true, y_pred), 1)
    counts = raw.sum(axis=1)
    safe = np.where(counts == 0, 1, counts)
    confusion = np.where(counts[:, None] == 0, 0.0, raw * 100.0 / safe[:, None])
    per_class = np.where(counts == 0, 0.0, np.diag(raw) / safe)
    return EvalReport(
        accuracy=float(np.mean(y_true == y_pred)),
        per_class_accuracy=per_class,
        confusion=confusion,
        counts=counts,
        classes=tuple(sorted(classes)) if classes is not None else ALL_CLASSES,
    )


def evaluate(
    model: MlpModel,
    x: np.ndarray,
    y: np.ndarray,
    classes: Sequence[EmotionLabel] | None = None,
) -> EvalReport:
    """Arg-max predictions of *model* on ``(x, y)`` summarised as a report."""
    return confusion_report(y, np.atleast_1d(predict(model, x)), classes)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def report_csv(report: EvalReport) -> str:
    """Confusion matrix as CSV: header ``Emotion,Anger,...``, one row per class."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["Emotion", *(c.title for c in EmotionLabel)])
    for cls, row in zip(EmotionLabel, report.confusion):
        writer.writerow([cls.title, *(f"{v:.2f}" for v in row)])
    return buf.getvalue()


def write_report_csv(report: EvalReport, path: str | Path) -> None:
    Path(path).write_text(report_csv(report), encoding="utf-8")


def write_report_json(report: EvalReport, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def format_confusion_table(report: EvalReport) -> str:
    """Fixed-width confusion matrix (percent) with the overall accuracy below."""
    names = [c.title for c in EmotionLabel]
    width = max(len(n) for n in names) + 2
    lines = ["Emotion".ljust(width) + "".join(n.rjust(width) for n in names)]
    for name, row in zip(names, report.confusion):
        lines.append(name.ljust(width) + "".join(f"{v:.2f}".rjust(width) for v in row))
    lines.append(f"Average accuracy: {report.accuracy * 100:.2f}%")
    return "\n".join(lines)
