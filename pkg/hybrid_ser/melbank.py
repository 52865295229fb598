"""Mel filterbank, (log-)Mel spectrograms and MFCCs.

Mel scale: ``mel(f) = 2595 * log10(1 + f / 700)``. Filters are triangles
of peak 1 whose feet sit on the neighbouring band centres, so adjacent
filters sum to one between the first and last centre.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.fft import dct

from hybrid_ser.errors import (
    AlreadyLogScaled,
    EmptyBand,
    GeometryMismatch,
    TooManyCoefficients,
)
from hybrid_ser.spectral import PowerSpectrogram

log = logging.getLogger(__name__)

DEFAULT_LOG_FLOOR = 1e-10
DEFAULT_MFCC_COEFFS = 13


def hz_to_mel(f: float | np.ndarray) -> float | np.ndarray:
    """Frequency in Hz to Mel."""
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m: float | np.ndarray) -> float | np.ndarray:
    """Inverse of :func:`hz_to_mel`."""
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


@dataclass(frozen=True)
class MelFilterbank:
    """Triangular Mel filters, ``weights`` shaped ``(num_bands, num_bins)``.

    ``centers`` holds the band centre frequencies in Hz.
    """

    weights: np.ndarray
    centers: np.ndarray
    f_min: float
    f_max: float
    sample_rate: int
    fft_size: int

    @property
    def num_bands(self) -> int:
        return int(self.weights.shape[0])

    @property
    def num_bins(self) -> int:
        return int(self.weights.shape[1])


@dataclass(frozen=True)
class MelSpectrogram:
    """Band-by-frame grid; energies unless ``log_scaled``."""

    values: np.ndarray
    sample_rate: int
    log_scaled: bool = False

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise GeometryMismatch(f"Mel spectrogram must be 2-D, got shape {values.shape}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def band_count(self) -> int:
        return int(self.values.shape[0])

    @property
    def frame_count(self) -> int:
        return int(self.values.shape[1])


def build_filterbank(
    sample_rate: int,
    fft_size: int,
    num_bands: int = 128,
    f_min: float = 0.0,
    f_max: float | None = None,
) -> MelFilterbank:
    """Build a Mel filterbank for one-sided spectra of length ``fft_size // 2 + 1``.

    Parameters
    ----------
    sample_rate:
        Sampling rate of the analysed signal in Hz.
    fft_size:
        DFT length the filterbank is applied to.
    num_bands:
        Number of Mel bands ``m``.
    f_min, f_max:
        Frequency range in Hz; ``f_max`` defaults to Nyquist.

    Raises
    ------
    EmptyBand
        A band falls between FFT bins and has no non-zero weight.
    """
    nyquist = sample_rate / 2.0
    if f_max is None:
        f_max = nyquist
    if not 0.0 <= f_min < f_max <= nyquist:
        raise ValueError(f"need 0 <= f_min < f_max <= {nyquist}, got f_min={f_min} f_max={f_max}")
    if num_bands < 1:
        raise ValueError(f"num_bands must be >= 1, got {num_bands}")

    edges = mel_to_hz(np.linspace(hz_to_mel(f_min), hz_to_mel(f_max), num_bands + 2))
    freqs = np.fft.rfftfreq(fft_size, d=1.0 / sample_rate)

    lower = (freqs[None, :] - edges[:-2, None]) / (edges[1:-1] - edges[:-2])[:, None]
    upper = (edges[2:, None] - freqs[None, :]) / (edges[2:] - edges[1:-1])[:, None]
    weights = np.maximum(0.0, np.minimum(lower, upper))

    empty = np.flatnonzero(weights.sum(axis=1) <= 0.0)
    if empty.size:
        raise EmptyBand(
            f"{empty.size} of {num_bands} Mel bands have no FFT bin support "
            f"(first empty band {int(empty[0])}); use fewer bands or a larger fft_size"
        )
    weights.flags.writeable = False
    centers = edges[1:-1]
    centers.flags.writeable = False
    return MelFilterbank(
        weights=weights,
        centers=centers,
        f_min=float(f_min),
        f_max=float(f_max),
        sample_rate=sample_rate,
        fft_size=fft_size,
    )


@lru_cache(maxsize=32)
def cached_filterbank(
    sample_rate: int,
    fft_size: int,
    num_bands: int,
    f_min: float = 0.0,
    f_max: float | None = None,
) -> MelFilterbank:
    """:func:`build_filterbank`, memoised; the result is read-only and shared."""
    return build_filterbank(sample_rate, fft_size, num_bands, f_min, f_max)


def mel_spectrogram(spec: PowerSpectrogram, fb: MelFilterbank) -> MelSpectrogram:
    """Project a power spectrogram through *fb*: ``weights @ power.T``."""
    if fb.num_bins != spec.num_bins:
        raise GeometryMismatch(f"filterbank has {fb.num_bins} bins, spectrogram has {spec.num_bins}")
    if fb.sample_rate != spec.sample_rate:
        raise GeometryMismatch(
            f"filterbank built for {fb.sample_rate} Hz, spectrogram is {spec.sample_rate} Hz"
        )
    return MelSpectrogram(values=fb.weights @ spec.values.T, sample_rate=spec.sample_rate)


def log_mel(mel: MelSpectrogram, floor: float = DEFAULT_LOG_FLOOR) -> MelSpectrogram:
    """Natural log of the Mel energies, clamped below at *floor*."""
    if mel.log_scaled:
        raise AlreadyLogScaled("Mel spectrogram is already log-scaled")
    if floor <= 0:
        raise ValueError(f"floor must be positive, got {floor}")
    return MelSpectrogram(
        values=np.log(np.maximum(mel.values, floor)),
        sample_rate=mel.sample_rate,
        log_scaled=True,
    )


def mfcc(log_mel: MelSpectrogram, num_coeffs: int = DEFAULT_MFCC_COEFFS) -> np.ndarray:
    """Orthonormal type-II DCT of each log-Mel column.

    Returns
    -------
    np.ndarray
        Shape ``(num_coeffs, frames)``.
    """
    if not log_mel.log_scaled:
        raise ValueError("mfcc expects a log-scaled Mel spectrogram")
    if num_coeffs < 1:
        raise ValueError(f"num_coeffs must be >= 1, got {num_coeffs}")
    if num_coeffs > log_mel.band_count:
        raise TooManyCoefficients(f"{num_coeffs} coefficients requested from {log_mel.band_count} bands")
    return dct(log_mel.values, type=2, norm="ortho", axis=0)[:num_coeffs]
