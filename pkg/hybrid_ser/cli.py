"""hybrid-ser command line.

Subcommands::

    hybrid-ser synth   --out corpus/ --clips 200
    hybrid-ser ingest  corpus/wav --out manifest.csv
    hybrid-ser extract manifest.csv --out maps.fmap --workers 4
    hybrid-ser render  maps.fmap --out png/ --colormap heat
    hybrid-ser train   maps.fmap --out run/
    hybrid-ser eval    run/model.mlpc maps.fmap
    hybrid-ser sweep   manifest.csv --grid geometry --out sweep.csv
    hybrid-ser sweep   manifest.csv --grid 128x128@88200 --lr 1e-4,3e-4 --batch-size 64,128

Every option can also come from a JSON file given with ``--config``
(keys are option names with ``_``); command-line values win. ``--seed``
and ``--workers`` fall back to ``HYBRID_SER_SEED`` / ``HYBRID_SER_WORKERS``.
Exit status is 0 when everything succeeded, 1 when some items failed
and 2 on a fatal error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import logging
import os
import re
import sys
from collections import Counter
from pathlib import Path
from typing import Any, Hashable, Sequence

import numpy as np

from hybrid_ser.aggregators import class_counts, collect_maps, failure_report, statistics
from hybrid_ser.classifier.checkpoint import load_model, save_model
from hybrid_ser.classifier.embedding import EMB2_MAGIC, embed_maps, export_embeddings, import_embeddings
from hybrid_ser.classifier.metrics import (
    EvalReport,
    evaluate,
    format_confusion_table,
    write_report_csv,
    write_report_json,
)
from hybrid_ser.classifier.training import TrainConfig, train
from hybrid_ser.config import env_name, load_config, resolve
from hybrid_ser.errors import CorruptFile, NoFilesFound
from hybrid_ser.featuremap import (
    FEATURE_KINDS,
    FMAP_MAGIC,
    EmotionLabel,
    FeatureMapSpec,
    load_maps,
    save_maps,
)
from hybrid_ser.formats import sniff_magic
from hybrid_ser.hpss import HpssConfig
from hybrid_ser.manifest import IngestResult, ManifestRow, parse_manifest, scan_directory, write_manifest
from hybrid_ser.pool import run_extraction
from hybrid_ser.render import COLORMAPS, render_maps
from hybrid_ser.synthetic import DEFAULT_DURATION, DEFAULT_RATE, generate_corpus

log = logging.getLogger("hybrid_ser")

Dataset = list[tuple[np.ndarray, EmotionLabel | None]]

# Accuracy-by-geometry grid, (bands, frames, sample_rate, window).
GEOMETRY_GRID: tuple[tuple[int, int, int, int], ...] = (
    (32, 32, 88200, 2048),
    (128, 128, 44100, 2048),
    (128, 128, 22050, 2048),
    (32, 32, 22050, 2048),
    (64, 64, 44100, 2048),
    (128, 128, 88200, 2048),
)
# Window size tied to sample rate at 128x128.
WINDOW_GRID: tuple[tuple[int, int, int, int], ...] = (
    (128, 128, 22050, 512),
    (128, 128, 44100, 1024),
    (128, 128, 88200, 2048),
)
SWEEP_COLUMNS = ("Band", "Frame", "Sample rate", "Accuracy")
HYPER_COLUMNS = ("Learning rate", "Batch size")

_CELL = re.compile(r"^\s*(\d+)\s*x\s*(\d+)\s*@\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


def _configure_logging(quiet: bool, verbose: bool = False) -> logging.Logger:
    logger = logging.getLogger("hybrid_ser")
    logger.setLevel(logging.DEBUG)
    for h in list(logger.handlers):
        if getattr(h, "_hybrid_ser_cli", False):
            logger.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler._hybrid_ser_cli = True  # type: ignore[attr-defined]
    level = logging.WARNING if quiet else logging.DEBUG if verbose else logging.INFO
    env_level = os.environ.get(env_name("log_level"))
    if env_level and not quiet and not verbose:
        level = logging.getLevelName(env_level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    handler.setLevel(level)
    handler.setFormatter(
        logging.Formatter("%(asctime)s [%(levelname)s] %(message)s", datefmt="%Y-%m-%d %H:%M:%S")
    )
    logger.addHandler(handler)
    return logger


# ---------------------------------------------------------------------------
# Datasets
# ---------------------------------------------------------------------------

def load_dataset(path: str | Path) -> tuple[Dataset, list[str]]:
    """Embeddings and source ids from an FMAP (pooled) or EMB2 (imported) file."""
    magic = sniff_magic(path)
    if magic == FMAP_MAGIC:
        maps = load_maps(path)
        return embed_maps(maps), [m.source_id for m in maps]
    if magic == EMB2_MAGIC:
        records = import_embeddings(path)
        return records, [f"{Path(path).stem}#{i}" for i in range(len(records))]
    raise CorruptFile(f"{path}: neither a feature-map (FMAP) nor an embedding (EMB2) file")


def speaker_groups(source_ids: Sequence[str], rows: Sequence[ManifestRow] | None = None) -> list[Hashable]:
    """Group key per example: the manifest speaker of its source file, else the file stem."""
    speakers = {r.path.stem: r.speaker for r in rows or () if r.speaker}
    groups: list[Hashable] = []
    for sid in source_ids:
        stem = sid.rsplit("#", 1)[0]
        groups.append(speakers.get(stem, stem))
    return groups


def parse_grid(text: str, base: FeatureMapSpec | None = None) -> list[FeatureMapSpec]:
    """Expand ``--grid``: ``geometry``, ``window`` or ``BANDSxFRAMES@RATE[/WINDOW],...``.

    Settings not named in a cell (hop, kind, ...) come from *base*.
    """
    base = base or FeatureMapSpec()
    name = text.strip().lower()
    if name == "geometry":
        cells = list(GEOMETRY_GRID)
    elif name == "window":
        cells = list(WINDOW_GRID)
    else:
        cells = []
        for part in text.split(","):
            m = _CELL.match(part)
            if not m:
                raise ValueError(f"bad grid cell {part!r}; expected BANDSxFRAMES@RATE[/WINDOW]")
            bands, frames, rate, window = m.groups()
            cells.append((int(bands), int(frames), int(rate), int(window) if window else base.window_size))
    if not cells:
        raise ValueError("grid is empty")
    return [
        dataclasses.replace(base, bands=b, frames=f, sample_rate=sr, window_size=w)
        for b, f, sr, w in cells
    ]


# ---------------------------------------------------------------------------
# Commands (library-callable)
# ---------------------------------------------------------------------------

def cmd_ingest(directory: str | Path, manifest: str | Path | None = None) -> IngestResult:
    """Labelled rows for a corpus, from a manifest CSV or the EMO-DB filename rule.

    Raises
    ------
    NoFilesFound
        Nothing usable was found.
    UnknownLabelCode
        A manifest label is not an emotion.
    """
    if manifest is not None:
        result = IngestResult()
        for row in parse_manifest(manifest):
            if row.path.is_file():
                result.rows.append(row)
            else:
                result.skipped.append({"path": str(row.path), "reason": "file not found"})
    else:
        result = scan_directory(directory)
    for skip in result.skipped:
        log.warning("skipped %s: %s", skip["path"], skip["reason"])
    if not result.rows:
        raise NoFilesFound(f"no labelled audio files in {manifest or directory}")
    return result


def cmd_extract(
    rows: Sequence[ManifestRow],
    spec: FeatureMapSpec,
    hpss_cfg: HpssConfig | None,
    out: str | Path,
    workers: int = 1,
) -> dict[str, Any]:
    """Extract feature maps for every row and write them to *out*.

    Per-file failures are reported, not raised. Returns a summary with
    ``maps``, ``class_counts`` and the ``failures`` report.
    """
    if not rows:
        raise NoFilesFound("manifest has no rows")
    log.info(
        "extracting %d files: %dx%d @ %d Hz, window %d, hop %d, kind %s, %d workers",
        len(rows), spec.bands, spec.frames, spec.sample_rate, spec.window_size, spec.hop, spec.kind, workers,
    )
    results = run_extraction(rows, spec, hpss_cfg, concurrency=workers)
    maps = collect_maps(results)
    save_maps(maps, out)
    report = failure_report(results)
    summary = {"maps": len(maps), "class_counts": class_counts(maps), "failures": report}
    log.info("%d maps from %d/%d files", len(maps), report["success_count"], report["total"])
    for f in report["failures"]:
        log.error("failed %s: %s", f["source"], f["error"])
    return summary


def cmd_render(maps_path: str | Path, out_dir: str | Path, colormap: str = "grayscale") -> list[Path]:
    """One PNG per map per channel."""
    return render_maps(load_maps(maps_path), out_dir, colormap)  # type: ignore[arg-type]


def _write_outputs(report: EvalReport, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_report_csv(report, out_dir / "report.csv")
    write_report_json(report, out_dir / "report.json")


def cmd_train(
    data_path: str | Path,
    cfg: TrainConfig,
    out_dir: str | Path,
    export_path: str | Path | None = None,
    manifest: str | Path | None = None,
) -> EvalReport:
    """Train on a maps or embeddings file; writes ``model.mlpc`` and ``report.{csv,json}``."""
    dataset, source_ids = load_dataset(data_path)
    if export_path is not None:
        export_embeddings(dataset, export_path)
    groups = None
    if cfg.group_by_speaker:
        groups = speaker_groups(source_ids, parse_manifest(manifest) if manifest else None)
    model, report = train(dataset, cfg, groups=groups)
    out_dir = Path(out_dir)
    _write_outputs(report, out_dir)
    save_model(model, out_dir / "model.mlpc")
    print(format_confusion_table(report))
    return report


def cmd_eval(model_path: str | Path, data_path: str | Path, out_dir: str | Path | None = None) -> EvalReport:
    """Evaluate a saved model on every labelled example of a maps/embeddings file."""
    model = load_model(model_path)
    dataset, _ = load_dataset(data_path)
    labelled = [(v, lbl) for v, lbl in dataset if lbl is not None]
    if not labelled:
        raise NoFilesFound(f"{data_path} holds no labelled examples")
    x = np.stack([np.asarray(v, dtype=np.float64) for v, _ in labelled])
    y = np.asarray([int(lbl) for _, lbl in labelled])
    report = evaluate(model, x, y, classes=sorted({lbl for _, lbl in labelled}))
    if out_dir is not None:
        _write_outputs(report, Path(out_dir))
    print(format_confusion_table(report))
    return report


def sweep_csv(cells: Sequence[dict[str, Any]], hyperparameters: bool = False) -> str:
    """Sweep results as CSV with columns ``Band,Frame,Sample rate,Accuracy``.

    With *hyperparameters* the ``Learning rate`` and ``Batch size`` of each
    cell are written before ``Accuracy``.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS[:3] + HYPER_COLUMNS + SWEEP_COLUMNS[3:] if hyperparameters else SWEEP_COLUMNS)
    for c in cells:
        acc = f"{c['accuracy'] * 100:.2f}%" if c["error"] is None else f"error: {c['error']}"
        row = [c["bands"], c["frames"], c["sample_rate"]]
        if hyperparameters:
            row += [f"{c['learning_rate']:g}", c["batch_size"]]
        writer.writerow([*row, acc])
    return buf.getvalue()


def cmd_sweep(
    rows: Sequence[ManifestRow],
    grid: Sequence[FeatureMapSpec],
    cfg: TrainConfig,
    out: str | Path,
    hpss_cfg: HpssConfig | None = None,
    workers: int = 1,
    learning_rates: Sequence[float] = (),
    batch_sizes: Sequence[int] = (),
) -> list[dict[str, Any]]:
    """Extract once per grid cell, then train once per learning rate and batch size.

    Every run shares ``cfg.seed``. Empty *learning_rates* / *batch_sizes*
    mean the single value in *cfg*; the table gains the two
    hyperparameter columns when more than one combination is tried. A
    failing cell becomes an error row and the sweep moves on.
    """
    if not rows:
        raise NoFilesFound("manifest has no rows")
    if not grid:
        raise ValueError("grid is empty")
    combos = [
        (float(lr), int(bs))
        for lr in (learning_rates or [cfg.learning_rate])
        for bs in (batch_sizes or [cfg.batch_size])
    ]
    cells: list[dict[str, Any]] = []
    for spec in grid:
        where = f"{spec.bands}x{spec.frames}@{spec.sample_rate}"
        base: dict[str, Any] = {
            "bands": spec.bands, "frames": spec.frames, "sample_rate": spec.sample_rate,
            "window": spec.window_size, "accuracy": None, "error": None, "failed_files": 0,
        }
        try:
            results = run_extraction(rows, spec, hpss_cfg, concurrency=workers)
            base["failed_files"] = failure_report(results)["failure_count"]
            maps = collect_maps(results)
            groups = speaker_groups([m.source_id for m in maps], rows) if cfg.group_by_speaker else None
            dataset = embed_maps(maps)
        except Exception as exc:
            error = f"{type(exc).__name__}: {exc}"
            log.error("cell %s failed: %s", where, error)
            cells.extend({**base, "learning_rate": lr, "batch_size": bs, "error": error} for lr, bs in combos)
            continue
        for lr, bs in combos:
            cell = {**base, "learning_rate": lr, "batch_size": bs}
            try:
                run_cfg = dataclasses.replace(cfg, learning_rate=lr, batch_size=bs)
                _, report = train(dataset, run_cfg, groups=groups)
                cell["accuracy"] = report.accuracy
            except Exception as exc:
                cell["error"] = f"{type(exc).__name__}: {exc}"
                log.error("cell %s lr=%g batch=%d failed: %s", where, lr, bs, cell["error"])
            else:
                log.info("cell %s lr=%g batch=%d: accuracy %.4f", where, lr, bs, cell["accuracy"])
            cells.append(cell)
    Path(out).write_text(sweep_csv(cells, hyperparameters=len(combos) > 1), encoding="utf-8")
    done = [c["accuracy"] for c in cells if c["error"] is None]
    if done:
        log.info("sweep accuracy: %s", {k: round(v, 4) for k, v in statistics(done).items()})
    return cells


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def _spec_from(args: argparse.Namespace, file_cfg: dict[str, Any]) -> FeatureMapSpec:
    d = FeatureMapSpec()
    return FeatureMapSpec(
        bands=resolve("bands", args.bands, file_cfg, d.bands, int),
        frames=resolve("frames", args.frames, file_cfg, d.frames, int),
        sample_rate=resolve("sample_rate", args.sample_rate, file_cfg, d.sample_rate, int),
        window_size=resolve("window", args.window, file_cfg, d.window_size, int),
        analysis_hop=resolve("hop", args.hop, file_cfg, None, int),
        subsample_hop_frames=resolve("subsample_hop", args.subsample_hop, file_cfg, None, int),
        kind=resolve("kind", args.kind, file_cfg, d.kind, str),
    )


def _hpss_from(args: argparse.Namespace, file_cfg: dict[str, Any]) -> HpssConfig:
    d = HpssConfig()
    return HpssConfig(
        kernel_time=resolve("kernel_time", args.kernel_time, file_cfg, d.kernel_time, int),
        kernel_freq=resolve("kernel_freq", args.kernel_freq, file_cfg, d.kernel_freq, int),
        power=resolve("mask_power", args.mask_power, file_cfg, d.power, float),
        mask_mode=resolve("mask_mode", args.mask_mode, file_cfg, d.mask_mode, str),
        use_masks=not resolve("raw_median", args.raw_median or None, file_cfg, False, bool),
    )


def _train_cfg_from(args: argparse.Namespace, file_cfg: dict[str, Any]) -> TrainConfig:
    d = TrainConfig()
    fractions = resolve("fractions", args.fractions, file_cfg, d.fractions, _floats)
    return TrainConfig(
        learning_rate=resolve("lr", args.lr, file_cfg, d.learning_rate, float),
        batch_size=resolve("batch_size", args.batch_size, file_cfg, d.batch_size, int),
        epochs=resolve("epochs", args.epochs, file_cfg, d.epochs, int),
        fractions=tuple(fractions),  # type: ignore[arg-type]
        seed=_seed(args, file_cfg),
        group_by_speaker=resolve("group_by_speaker", args.group_by_speaker or None, file_cfg, False, bool),
        layer_sizes=tuple(resolve("layer_sizes", None, file_cfg, d.layer_sizes, _ints)),
        dropout=tuple(resolve("dropout", None, file_cfg, d.dropout, _floats)),
    )


def _parts(value: Any) -> Sequence[Any]:
    if isinstance(value, str):
        return value.split(",")
    if isinstance(value, (int, float)):
        return [value]
    return value


def _floats(value: Any) -> tuple[float, ...]:
    return tuple(float(v) for v in _parts(value))


def _ints(value: Any) -> tuple[int, ...]:
    return tuple(int(v) for v in _parts(value))


def _seed(args: argparse.Namespace, file_cfg: dict[str, Any]) -> int:
    return resolve("seed", args.seed, file_cfg, 0, int)


def _workers(args: argparse.Namespace, file_cfg: dict[str, Any]) -> int:
    return resolve("workers", args.workers, file_cfg, 1, int)


def _run_ingest(args: argparse.Namespace, file_cfg: dict[str, Any]) -> int:
    result = cmd_ingest(args.directory, args.manifest)
    out = Path(args.out) if args.out else Path(args.directory) / "manifest.csv"
    write_manifest(result.rows, out)
    counts = dict(Counter(r.label.name.lower() for r in result.rows))
    log.info("wrote %d rows to %s (%s); %d skipped", len(result.rows), out, counts, len(result.skipped))
    return 0


def _run_extract(args: argparse.Namespace, file_cfg: dict[str, Any]) -> int:
    summary = cmd_extract(
        parse_manifest(args.manifest),
        _spec_from(args, file_cfg),
        _hpss_from(args, file_cfg),
        args.out or "maps.fmap",
        workers=_workers(args, file_cfg),
    )
    log.info("maps per class: %s", summary["class_counts"])
    return 1 if summary["failures"]["failure_count"] else 0


def _run_render(args: argparse.Namespace, file_cfg: dict[str, Any]) -> int:
    colormap = resolve("colormap", args.colormap, file_cfg, "grayscale", str)
    cmd_render(args.maps, args.out or "renders", colormap)
    return 0


def _run_train(args: argparse.Namespace, file_cfg: dict[str, Any]) -> int:
    cmd_train(
        args.data,
        _train_cfg_from(args, file_cfg),
        args.out or "run",
        export_path=args.export_embeddings,
        manifest=args.manifest,
    )
    return 0


def _run_eval(args: argparse.Namespace, file_cfg: dict[str, Any]) -> int:
    cmd_eval(args.model, args.data, args.out)
    return 0


def _run_sweep(args: argparse.Namespace, file_cfg: dict[str, Any]) -> int:
    base = _spec_from(args, file_cfg)
    grid = parse_grid(resolve("grid", args.grid, file_cfg, "geometry", str), base)
    learning_rates = resolve("lr", args.lr, file_cfg, (), _floats)
    batch_sizes = resolve("batch_size", args.batch_size, file_cfg, (), _ints)
    # lr and batch_size may be lists here; the base config takes its defaults.
    single = argparse.Namespace(**{**vars(args), "lr": None, "batch_size": None})
    base_cfg = {k: v for k, v in file_cfg.items() if k not in ("lr", "batch_size")}
    cells = cmd_sweep(
        parse_manifest(args.manifest),
        grid,
        _train_cfg_from(single, base_cfg),
        args.out or "sweep.csv",
        hpss_cfg=_hpss_from(args, file_cfg),
        workers=_workers(args, file_cfg),
        learning_rates=learning_rates,
        batch_sizes=batch_sizes,
    )
    return 1 if any(c["error"] or c["failed_files"] for c in cells) else 0


def _run_synth(args: argparse.Namespace, file_cfg: dict[str, Any]) -> int:
    generate_corpus(
        args.out or "synthetic",
        clips=resolve("clips", args.clips, file_cfg, 200, int),
        seed=_seed(args, file_cfg),
        sample_rate=resolve("synth_rate", args.synth_rate, file_cfg, DEFAULT_RATE, int),
        duration=resolve("duration", args.duration, file_cfg, DEFAULT_DURATION, float),
    )
    return 0


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("feature map")
    g.add_argument("--bands", type=int, default=None, help="Mel bands (default: 128)")
    g.add_argument("--frames", type=int, default=None, help="frames per map (default: 128)")
    g.add_argument("--sample-rate", type=int, default=None, help="analysis rate in Hz (default: 88200)")
    g.add_argument("--window", type=int, default=None, help="Hann window / DFT size (default: 2048)")
    g.add_argument("--hop", type=int, default=None, help="STFT hop in samples (default: window)")
    g.add_argument("--subsample-hop", type=int, default=None, help="subsample advance in frames (default: frames)")
    g.add_argument("--kind", choices=FEATURE_KINDS, default=None, help="feature kind (default: hybrid)")
    h = p.add_argument_group("decomposition")
    h.add_argument("--kernel-time", type=int, default=None, help="harmonic median length (default: 31)")
    h.add_argument("--kernel-freq", type=int, default=None, help="percussive median length (default: 31)")
    h.add_argument("--mask-power", type=float, default=None, help="soft mask exponent (default: 2)")
    h.add_argument("--mask-mode", choices=("soft", "binary"), default=None, help="mask type (default: soft)")
    h.add_argument("--raw-median", action="store_true", help="use median-filtered grids directly, no masks")


def _add_train_args(p: argparse.ArgumentParser, lists: bool = False) -> None:
    g = p.add_argument_group("training")
    if lists:
        g.add_argument("--lr", type=_floats, default=None, help="Adam learning rates, comma-separated (default: 1e-4)")
        g.add_argument("--batch-size", type=_ints, default=None, help="mini-batch sizes, comma-separated (default: 128)")
    else:
        g.add_argument("--lr", type=float, default=None, help="Adam learning rate (default: 1e-4)")
        g.add_argument("--batch-size", type=int, default=None, help="mini-batch size (default: 128)")
    g.add_argument("--epochs", type=int, default=None, help="epochs (default: 128)")
    g.add_argument("--fractions", type=_floats, default=None, help="train,val,test shares (default: 0.8,0.1,0.1)")
    g.add_argument("--group-by-speaker", action="store_true", help="speaker-independent split")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (or HYBRID_SER_SEED; default 0)")
    common.add_argument("--config", type=Path, default=None, help="JSON file of option values")
    common.add_argument("--out", default=None, help="output file or directory")
    common.add_argument("-q", "--quiet", action="store_true", help="only log warnings and errors")
    common.add_argument("-v", "--verbose", action="store_true", help="log debug detail")

    parser = argparse.ArgumentParser(
        prog="hybrid-ser",
        description="Hybrid harmonic/percussive Mel feature maps and an MLP emotion classifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="label a corpus directory, write a manifest")
    p.add_argument("directory", type=Path)
    p.add_argument("--manifest", type=Path, default=None, help="validate this manifest instead of filename rules")
    p.set_defaults(func=_run_ingest)

    p = sub.add_parser("extract", parents=[common], help="manifest -> FMAP feature-map file")
    p.add_argument("manifest", type=Path)
    p.add_argument("--workers", type=int, default=None, help="files in flight (or HYBRID_SER_WORKERS; default 1)")
    _add_spec_args(p)
    p.set_defaults(func=_run_extract)

    p = sub.add_parser("render", parents=[common], help="FMAP file -> PNG images")
    p.add_argument("maps", type=Path)
    p.add_argument("--colormap", choices=COLORMAPS, default=None)
    p.set_defaults(func=_run_render)

    p = sub.add_parser("train", parents=[common], help="train the classifier on FMAP or EMB2 data")
    p.add_argument("data", type=Path)
    p.add_argument("--export-embeddings", type=Path, default=None, help="also write the pooled vectors (EMB2)")
    p.add_argument("--manifest", type=Path, default=None, help="speaker ids for --group-by-speaker")
    _add_train_args(p)
    p.set_defaults(func=_run_train)

    p = sub.add_parser("eval", parents=[common], help="evaluate a checkpoint on FMAP or EMB2 data")
    p.add_argument("model", type=Path)
    p.add_argument("data", type=Path)
    p.set_defaults(func=_run_eval)

    p = sub.add_parser(
        "sweep", parents=[common], help="extract+train per geometry, learning rate and batch size; write a table"
    )
    p.add_argument("manifest", type=Path)
    p.add_argument("--grid", default=None, help="geometry, window or BANDSxFRAMES@RATE[/WINDOW],...")
    p.add_argument("--workers", type=int, default=None)
    _add_spec_args(p)
    _add_train_args(p, lists=True)
    p.set_defaults(func=_run_sweep)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic 4-class corpus")
    p.add_argument("--clips", type=int, default=None, help="number of clips (default: 200)")
    p.add_argument("--synth-rate", type=int, default=None, help=f"WAV sample rate (default: {DEFAULT_RATE})")
    p.add_argument("--duration", type=float, default=None, help=f"clip seconds (default: {DEFAULT_DURATION})")
    p.set_defaults(func=_run_synth)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.quiet, args.verbose)
    try:
        file_cfg = load_config(args.config)
        return args.func(args, file_cfg)
    except (ValueError, OSError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
