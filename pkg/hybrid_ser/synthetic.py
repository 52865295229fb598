"""Synthetic labelled corpus with clearly different harmonic/percussive content.

Four clip kinds are mapped onto four emotion labels:

========== =========== ==============================================
kind       label       content
========== =========== ==============================================
harmonic   neutral     steady harmonic tone stack
percussive anger       train of short broadband clicks
mixed      happiness   tone stack plus dense clicks of equal energy
noise      sadness     stationary white noise
========== =========== ==============================================
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from hybrid_ser.featuremap import EmotionLabel
from hybrid_ser.manifest import ManifestRow, write_manifest

log = logging.getLogger(__name__)

SYNTH_LABELS: dict[str, EmotionLabel] = {
    "harmonic": EmotionLabel.NEUTRAL,
    "percussive": EmotionLabel.ANGER,
    "mixed": EmotionLabel.HAPPINESS,
    "noise": EmotionLabel.SADNESS,
}
DEFAULT_DURATION = 2.9
DEFAULT_RATE = 16000
NOISE_FLOOR = 1e-3
PEAK = 0.9
# Click period ranges in seconds.
SPARSE_CLICKS = (0.08, 0.2)
DENSE_CLICKS = (0.02, 0.04)


def _tone_stack(t: np.ndarray, rng: np.random.Generator, sample_rate: int) -> np.ndarray:
    f0 = rng.uniform(110.0, 320.0)
    n_harm = int(rng.integers(4, 9))
    out = np.zeros_like(t)
    for h in range(1, n_harm + 1):
        if h * f0 >= 0.45 * sample_rate:
            break
        out += rng.uniform(0.3, 1.0) / h * np.sin(2 * np.pi * h * f0 * t + rng.uniform(0, 2 * np.pi))
    return out


def _clicks(
    n: int,
    rng: np.random.Generator,
    sample_rate: int,
    period_range: tuple[float, float] = SPARSE_CLICKS,
    burst_seconds: float = 0.004,
) -> np.ndarray:
    out = np.zeros(n)
    period = int(rng.uniform(*period_range) * sample_rate)
    burst = max(8, int(burst_seconds * sample_rate))
    envelope = np.exp(-np.arange(burst) / (burst / 5.0))
    start = int(rng.integers(0, period))
    for pos in range(start, n - burst, period):
        out[pos : pos + burst] += rng.uniform(0.6, 1.0) * envelope * rng.standard_normal(burst)
    return out


def _unit_rms(x: np.ndarray) -> np.ndarray:
    rms = float(np.sqrt(np.mean(x**2)))
    return x / rms if rms > 0 else x


def synth_clip(
    kind: str,
    rng: np.random.Generator,
    sample_rate: int = DEFAULT_RATE,
    duration: float = DEFAULT_DURATION,
) -> np.ndarray:
    """One clip of *kind*, peak-normalised to 0.9, float64."""
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    if kind == "harmonic":
        x = _tone_stack(t, rng, sample_rate)
    elif kind == "percussive":
        x = _clicks(n, rng, sample_rate)
    elif kind == "mixed":
        # Tones and dense clicks at equal RMS.
        x = _unit_rms(_tone_stack(t, rng, sample_rate)) + _unit_rms(
            _clicks(n, rng, sample_rate, DENSE_CLICKS, burst_seconds=0.012)
        )
    elif kind == "noise":
        x = rng.standard_normal(n) * rng.uniform(0.2, 0.5)
    else:
        raise ValueError(f"unknown clip kind {kind!r}; expected one of {tuple(SYNTH_LABELS)}")
    peak = np.max(np.abs(x))
    if peak > 0:
        x = x * (PEAK / peak)
    return x + NOISE_FLOOR * rng.standard_normal(n)


def generate_corpus(
    out_dir: str | Path,
    clips: int = 200,
    seed: int = 0,
    sample_rate: int = DEFAULT_RATE,
    duration: float = DEFAULT_DURATION,
    speakers: int = 10,
) -> tuple[Path, list[ManifestRow]]:
    """Write *clips* PCM16 WAV files and ``manifest.csv`` under *out_dir*.

    Kinds cycle harmonic, percussive, mixed, noise; speaker ids cycle over
    *speakers* values. Returns the manifest path and its rows.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    kinds = list(SYNTH_LABELS)
    rows: list[ManifestRow] = []
    for i in range(clips):
        kind = kinds[i % len(kinds)]
        x = synth_clip(kind, rng, sample_rate, duration)
        pcm = np.clip(np.rint(x * 32767.0), -32768, 32767).astype(np.int16)
        path = out_dir / f"{kind}_{i:04d}.wav"
        wavfile.write(path, sample_rate, pcm)
        rows.append(ManifestRow(path=path, label=SYNTH_LABELS[kind], speaker=f"s{i % speakers:02d}"))
    manifest = out_dir / "manifest.csv"
    write_manifest(rows, manifest)
    log.info("generated %d synthetic clips in %s", clips, out_dir)
    return manifest, rows
