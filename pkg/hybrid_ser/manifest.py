"""Dataset manifests: which audio file carries which emotion.

Manifest format -- CSV with a ``path,label[,speaker]`` header::

    path,label,speaker
    wav/03a01Wa.wav,anger,03
    wav/03a01Nc.wav,neutral,03

Blank lines and lines starting with ``#`` are ignored. Relative paths are
resolved against the manifest's directory.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from hybrid_ser.errors import NoFilesFound, UnknownLabelCode
from hybrid_ser.featuremap import EmotionLabel

log = logging.getLogger(__name__)

MANIFEST_COLUMNS = ("path", "label", "speaker")

# Letter at index 5 of an EMO-DB file stem (e.g. "03a01Wa").
EMODB_CODES: dict[str, EmotionLabel] = {
    "W": EmotionLabel.ANGER,
    "L": EmotionLabel.BOREDOM,
    "E": EmotionLabel.DISGUST,
    "A": EmotionLabel.FEAR,
    "F": EmotionLabel.HAPPINESS,
    "T": EmotionLabel.SADNESS,
    "N": EmotionLabel.NEUTRAL,
}


@dataclass(frozen=True)
class ManifestRow:
    """One labelled audio file, with an optional speaker id."""

    path: Path
    label: EmotionLabel
    speaker: str | None = None


@dataclass
class IngestResult:
    """Rows that were labelled plus files that were skipped and why."""

    rows: list[ManifestRow] = field(default_factory=list)
    skipped: list[dict[str, str]] = field(default_factory=list)


def parse_manifest(path: str | Path) -> list[ManifestRow]:
    """Parse a manifest CSV and return its rows in file order.

    Raises
    ------
    UnknownLabelCode
        A label cell is not one of the seven emotions.
    ValueError
        A path appears twice or a row lacks the path/label columns.
    """
    path = Path(path)
    base = path.parent
    rows: list[ManifestRow] = []
    seen: set[Path] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        lines = (ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#"))
        reader = csv.reader(lines)
        for lineno, cells in enumerate(reader, start=1):
            cells = [c.strip() for c in cells]
            if lineno == 1 and [c.lower() for c in cells[:2]] == ["path", "label"]:
                continue
            if len(cells) < 2 or not cells[0]:
                raise ValueError(f"{path}: row {lineno} needs at least path and label, got {cells}")
            p = Path(cells[0])
            if not p.is_absolute():
                p = base / p
            if p in seen:
                raise ValueError(f"{path}: duplicate path {cells[0]}")
            seen.add(p)
            speaker = cells[2] if len(cells) > 2 and cells[2] else None
            rows.append(ManifestRow(path=p, label=EmotionLabel.parse(cells[1]), speaker=speaker))
    return rows


def write_manifest(rows: Sequence[ManifestRow], path: str | Path) -> None:
    """Write *rows* as CSV, with paths relative to the manifest where possible."""
    path = Path(path)
    base = path.parent.resolve()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_COLUMNS)
        for row in rows:
            p = row.path.resolve()
            try:
                shown = p.relative_to(base).as_posix()
            except ValueError:
                shown = p.as_posix()
            writer.writerow([shown, row.label.name.lower(), row.speaker or ""])


def label_from_filename(stem: str) -> EmotionLabel:
    """EMO-DB rule: the sixth character of the stem is the emotion code."""
    if len(stem) < 6:
        raise UnknownLabelCode(f"file stem {stem!r} is too short for the EMO-DB naming rule")
    code = stem[5]
    try:
        return EMODB_CODES[code]
    except KeyError:
        raise UnknownLabelCode(f"emotion code {code!r} in {stem!r} is not recognised") from None


def speaker_from_filename(stem: str) -> str:
    """EMO-DB rule: the first two characters name the speaker."""
    return stem[:2]


def scan_directory(directory: str | Path, pattern: str = "*.wav") -> IngestResult:
    """Label every file under *directory* by the EMO-DB filename rule.

    Files whose name does not follow the rule are recorded in
    ``skipped`` rather than raising.

    Raises
    ------
    NoFilesFound
        No file matches *pattern*.
    """
    directory = Path(directory)
    files = sorted(p for p in directory.rglob(pattern) if p.is_file())
    if not files:
        raise NoFilesFound(f"no files matching {pattern!r} under {directory}")
    result = IngestResult()
    for f in files:
        try:
            label = label_from_filename(f.stem)
        except UnknownLabelCode as exc:
            result.skipped.append({"path": str(f), "reason": str(exc)})
            continue
        result.rows.append(ManifestRow(path=f, label=label, speaker=speaker_from_filename(f.stem)))
    log.info("scanned %s: %d labelled, %d skipped", directory, len(result.rows), len(result.skipped))
    return result
