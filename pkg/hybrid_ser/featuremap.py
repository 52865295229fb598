"""Feature maps: fixed-length subsamples turned into normalised Mel grids.

The default ``hybrid`` kind stacks two ``(bands, frames)`` channels:

* channel 0 -- log of the averaged harmonic/percussive Mel energies
* channel 1 -- the plain log-Mel spectrogram

Each channel is min-max normalised to ``[0, 1]`` per map.
"""

from __future__ import annotations

import enum
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Sequence, TypeVar

import numpy as np

from hybrid_ser.audio_io import AudioBuffer, resample
from hybrid_ser.errors import CorruptFile, GeometryMismatch, MissingClass, UnknownLabelCode
from hybrid_ser.formats import BinaryReader, BinaryWriter, read_framed
from hybrid_ser.hpss import HpssConfig, averaged_hp, decompose
from hybrid_ser.melbank import (
    DEFAULT_LOG_FLOOR,
    DEFAULT_MFCC_COEFFS,
    cached_filterbank,
    log_mel,
    mel_spectrogram,
    mfcc,
)
from hybrid_ser.spectral import hanning, power, stft

log = logging.getLogger(__name__)

T = TypeVar("T")


class EmotionLabel(enum.IntEnum):
    """The seven emotion classes; the ordinal is the on-disk code."""

    ANGER = 0
    BOREDOM = 1
    DISGUST = 2
    FEAR = 3
    HAPPINESS = 4
    NEUTRAL = 5
    SADNESS = 6

    @classmethod
    def parse(cls, text: str) -> "EmotionLabel":
        """Look up a label by name (case-insensitive) or ordinal string."""
        key = text.strip()
        if key.isdigit() and int(key) < len(cls):
            return cls(int(key))
        try:
            return cls[key.upper()]
        except KeyError:
            raise UnknownLabelCode(f"unknown emotion label {text!r}") from None

    @property
    def title(self) -> str:
        return self.name.capitalize()


FeatureKind = Literal["hybrid", "mel", "mfcc", "mel_mfcc"]
FEATURE_KINDS: tuple[str, ...] = ("hybrid", "mel", "mfcc", "mel_mfcc")

CHANNEL_MEANING: dict[str, tuple[str, ...]] = {
    "hybrid": ("avg_hp", "log_mel"),
    "mel": ("log_mel",),
    "mfcc": ("mfcc",),
    "mel_mfcc": ("log_mel", "mfcc"),
}


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeatureMapSpec:
    """Geometry of one feature map and the analysis that produces it.

    Parameters
    ----------
    bands, frames:
        Map height (Mel bands) and width (STFT frames).
    sample_rate:
        Analysis rate; input audio is resampled to it.
    window_size:
        Hann window and DFT length in samples.
    analysis_hop:
        STFT hop inside a subsample; defaults to ``window_size``
        (non-overlapping frames).
    subsample_hop_frames:
        Subsample advance in frames; defaults to ``frames`` (no overlap).
    kind:
        Which channels to build, see :data:`CHANNEL_MEANING`.
    """

    bands: int = 128
    frames: int = 128
    sample_rate: int = 88200
    window_size: int = 2048
    analysis_hop: int | None = None
    subsample_hop_frames: int | None = None
    kind: FeatureKind = "hybrid"
    f_min: float = 0.0
    f_max: float | None = None
    log_floor: float = DEFAULT_LOG_FLOOR

    def __post_init__(self) -> None:
        if self.bands < 1 or self.frames < 1:
            raise ValueError(f"bands and frames must be >= 1, got {self.bands}x{self.frames}")
        if self.window_size < 2:
            raise ValueError(f"window_size must be >= 2, got {self.window_size}")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.analysis_hop is not None and self.analysis_hop < 1:
            raise ValueError(f"analysis_hop must be >= 1, got {self.analysis_hop}")
        if self.subsample_hop_frames is not None and self.subsample_hop_frames < 1:
            raise ValueError(f"subsample_hop_frames must be >= 1, got {self.subsample_hop_frames}")
        if self.kind not in FEATURE_KINDS:
            raise ValueError(f"kind must be one of {FEATURE_KINDS}, got {self.kind!r}")

    @property
    def hop(self) -> int:
        return self.analysis_hop or self.window_size

    @property
    def subsample_length(self) -> int:
        """Samples per subsample, ``frames * hop``."""
        return self.frames * self.hop

    @property
    def advance(self) -> int:
        """Samples between consecutive subsample starts."""
        return (self.subsample_hop_frames or self.frames) * self.hop

    @property
    def channels(self) -> int:
        return len(CHANNEL_MEANING[self.kind])

    @property
    def map_bands(self) -> int:
        """Height of the produced grids (13 for ``mfcc``)."""
        return DEFAULT_MFCC_COEFFS if self.kind == "mfcc" else self.bands

    @property
    def subsample_seconds(self) -> float:
        return self.subsample_length / self.sample_rate


@dataclass(frozen=True, eq=False)
class FeatureMap:
    """Normalised float32 channels shaped ``(channels, bands, frames)``."""

    channels: np.ndarray
    label: EmotionLabel | None = None
    source_id: str = ""

    def __post_init__(self) -> None:
        arr = np.array(self.channels, dtype=np.float32)
        if arr.ndim != 3 or arr.shape[0] < 1:
            raise GeometryMismatch(f"feature map must be (channels, bands, frames), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("feature map values must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "channels", arr)
        if self.label is not None:
            object.__setattr__(self, "label", EmotionLabel(self.label))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureMap):
            return NotImplemented
        return (
            self.label == other.label
            and self.source_id == other.source_id
            and self.channels.shape == other.channels.shape
            and bool(np.array_equal(self.channels, other.channels))
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def num_channels(self) -> int:
        return int(self.channels.shape[0])

    @property
    def bands(self) -> int:
        return int(self.channels.shape[1])

    @property
    def frames(self) -> int:
        return int(self.channels.shape[2])


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def subsample(buf: AudioBuffer, spec: FeatureMapSpec) -> list[AudioBuffer]:
    """Slice *buf* into ``spec.subsample_length`` pieces.

    Pieces start every ``spec.advance`` samples; the last one is
    zero-padded. At least one piece is always returned, so an empty or
    short buffer gives a single padded subsample.
    """
    if buf.sample_rate != spec.sample_rate:
        raise GeometryMismatch(
            f"buffer is {buf.sample_rate} Hz, spec expects {spec.sample_rate} Hz; resample first"
        )
    length, advance = spec.subsample_length, spec.advance
    count = 1 + max(0, math.ceil((len(buf) - length) / advance))
    padded = np.zeros((count - 1) * advance + length, dtype=np.float64)
    padded[: len(buf)] = buf.samples
    return [
        AudioBuffer(samples=padded[i * advance : i * advance + length], sample_rate=buf.sample_rate)
        for i in range(count)
    ]


def normalise(grid: np.ndarray) -> np.ndarray:
    """Min-max scale to ``[0, 1]``; a constant grid maps to zeros."""
    lo, hi = float(grid.min()), float(grid.max())
    if hi <= lo:
        return np.zeros_like(grid, dtype=np.float64)
    return (grid - lo) / (hi - lo)


def build_feature_map(
    sub: AudioBuffer,
    spec: FeatureMapSpec,
    hpss_cfg: HpssConfig | None = None,
    *,
    label: EmotionLabel | None = None,
    source_id: str = "",
) -> FeatureMap:
    """Turn one subsample into a feature map of kind ``spec.kind``.

    Raises
    ------
    GeometryMismatch
        *sub* is not ``spec.subsample_length`` long, or the STFT does
        not produce exactly ``spec.frames`` frames.
    """
    if len(sub) != spec.subsample_length:
        raise GeometryMismatch(f"subsample has {len(sub)} samples, expected {spec.subsample_length}")
    spectrum = stft(sub, spec.window_size, spec.hop, hanning(spec.window_size))
    if spectrum.num_frames != spec.frames:
        raise GeometryMismatch(f"STFT produced {spectrum.num_frames} frames, expected {spec.frames}")

    fb = cached_filterbank(sub.sample_rate, spec.window_size, spec.bands, spec.f_min, spec.f_max)
    mel = mel_spectrogram(power(spectrum), fb)
    lmel = log_mel(mel, spec.log_floor)

    if spec.kind == "hybrid":
        avg = averaged_hp(decompose(mel, hpss_cfg or HpssConfig()))
        grids = [log_mel(avg, spec.log_floor).values, lmel.values]
    elif spec.kind == "mel":
        grids = [lmel.values]
    elif spec.kind == "mfcc":
        grids = [mfcc(lmel, DEFAULT_MFCC_COEFFS)]
    else:
        grids = [lmel.values, mfcc(lmel, spec.bands)]

    channels = np.stack([normalise(g) for g in grids]).astype(np.float32)
    return FeatureMap(channels=channels, label=label, source_id=source_id)


def extract_maps(
    buf: AudioBuffer,
    spec: FeatureMapSpec,
    hpss_cfg: HpssConfig | None = None,
    *,
    label: EmotionLabel | None = None,
    source_id: str = "",
) -> list[FeatureMap]:
    """Resample, subsample and map a whole signal; ids are ``source_id#i``."""
    buf = resample(buf, spec.sample_rate)
    subs = subsample(buf, spec)
    log.debug("%s: %d samples -> %d subsamples", source_id or "<buffer>", len(buf), len(subs))
    return [
        build_feature_map(s, spec, hpss_cfg, label=label, source_id=f"{source_id}#{i}")
        for i, s in enumerate(subs)
    ]


# ---------------------------------------------------------------------------
# Class balancing
# ---------------------------------------------------------------------------

def oversample(
    dataset: Sequence[tuple[T, EmotionLabel]],
    seed: int,
    classes: Sequence[EmotionLabel] | None = None,
) -> list[tuple[T, EmotionLabel]]:
    """Duplicate minority-class items until every class matches the largest.

    The original items come first, in input order, followed by the
    duplicates for each class in ordinal order. Duplicates are drawn
    uniformly with replacement from a generator seeded by *seed*.

    Parameters
    ----------
    classes:
        Classes that must be present and balanced; defaults to the labels
        that occur in *dataset*. Items of other labels are kept as-is.

    Raises
    ------
    MissingClass
        A declared class has no items, or *dataset* is empty.
    """
    if not dataset:
        raise MissingClass("cannot oversample an empty dataset")
    declared = sorted({EmotionLabel(c) for c in classes} if classes is not None else {lbl for _, lbl in dataset})
    by_class: dict[EmotionLabel, list[int]] = {c: [] for c in declared}
    for i, (_, lbl) in enumerate(dataset):
        if lbl in by_class:
            by_class[lbl].append(i)
    missing = [c.name.lower() for c, idx in by_class.items() if not idx]
    if missing:
        raise MissingClass(f"no examples for class(es): {', '.join(missing)}")

    target = max(len(idx) for idx in by_class.values())
    rng = np.random.default_rng(seed)
    out = list(dataset)
    for cls in declared:
        idx = by_class[cls]
        need = target - len(idx)
        if need:
            picks = rng.choice(np.asarray(idx), size=need, replace=True)
            out.extend(dataset[int(j)] for j in picks)
    log.debug("oversample: %s -> %d per class", dict(Counter(lbl.name for _, lbl in dataset)), target)
    return out


# ---------------------------------------------------------------------------
# FMAP files
# ---------------------------------------------------------------------------

FMAP_MAGIC = b"FMAP"
FMAP_VERSION = 1
UNLABELED = 255


def maps_to_bytes(maps: Sequence[FeatureMap]) -> bytes:
    w = BinaryWriter(FMAP_MAGIC, FMAP_VERSION)
    w.pack("I", len(maps))
    for m in maps:
        w.pack("HHHB", m.bands, m.frames, m.num_channels, UNLABELED if m.label is None else int(m.label))
        w.text(m.source_id)
        w.array(m.channels, "<f4")
    return w.to_bytes()


def _read_maps(r: BinaryReader) -> list[FeatureMap]:
    (count,) = r.unpack("I")
    maps: list[FeatureMap] = []
    for _ in range(count):
        bands, frames, channels, code = r.unpack("HHHB")
        source_id = r.text()
        values = r.array("<f4", channels * bands * frames).reshape(channels, bands, frames)
        if code != UNLABELED and code >= len(EmotionLabel):
            raise CorruptFile(f"label code {code} is not an emotion class")
        label = None if code == UNLABELED else EmotionLabel(code)
        maps.append(FeatureMap(channels=values, label=label, source_id=source_id))
    r.expect_end()
    return maps


def maps_from_bytes(data: bytes) -> list[FeatureMap]:
    return _read_maps(BinaryReader(data, FMAP_MAGIC, (FMAP_VERSION,)))


def save_maps(maps: Sequence[FeatureMap], path: str | Path) -> None:
    """Write *maps* to an FMAP file."""
    Path(path).write_bytes(maps_to_bytes(maps))
    log.info("wrote %d feature maps to %s", len(maps), path)


def load_maps(path: str | Path) -> list[FeatureMap]:
    """Read an FMAP file written by :func:`save_maps`.

    Raises
    ------
    CorruptFile
        Bad magic, checksum mismatch or truncated body.
    VersionMismatch
        Intact file of an unknown version.
    """
    return _read_maps(read_framed(path, FMAP_MAGIC, (FMAP_VERSION,)))
