"""Windowing and short-time Fourier analysis.

The STFT is one-sided (real input): a spectrogram has ``N/2 + 1`` bins per
frame. Frame ``n`` covers samples ``[n*H, n*H + N)``; a trailing partial
frame is zero-padded.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from hybrid_ser.audio_io import AudioBuffer
from hybrid_ser.errors import DegenerateWindow, EmptySignal, GeometryMismatch

log = logging.getLogger(__name__)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class WindowFunction:
    """Analysis window coefficients."""

    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.array(self.coefficients, dtype=np.float64)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("window coefficients must be a non-empty 1-D array")
        object.__setattr__(self, "coefficients", _frozen(coeffs))

    @property
    def length(self) -> int:
        return int(self.coefficients.size)


@dataclass(frozen=True)
class ComplexSpectrogram:
    """One-sided STFT, shape ``(num_frames, fft_size // 2 + 1)``."""

    bins: np.ndarray
    fft_size: int
    hop: int
    sample_rate: int

    def __post_init__(self) -> None:
        bins = np.array(self.bins, dtype=np.complex128)
        if bins.ndim != 2 or bins.shape[1] != self.fft_size // 2 + 1:
            raise GeometryMismatch(
                f"expected (frames, {self.fft_size // 2 + 1}) bins, got {bins.shape}"
            )
        object.__setattr__(self, "bins", _frozen(bins))

    @property
    def num_frames(self) -> int:
        return int(self.bins.shape[0])

    @property
    def num_bins(self) -> int:
        return int(self.bins.shape[1])


@dataclass(frozen=True)
class PowerSpectrogram:
    """Squared magnitudes with the geometry of the source spectrogram."""

    values: np.ndarray
    fft_size: int
    hop: int
    sample_rate: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen(np.array(self.values, dtype=np.float64)))

    @property
    def num_frames(self) -> int:
        return int(self.values.shape[0])

    @property
    def num_bins(self) -> int:
        return int(self.values.shape[1])


def hanning(M: int) -> WindowFunction:
    """Symmetric Hann window ``sin^2(pi*n/(M-1))`` for ``0 <= n < M``.

    The first half is evaluated and mirrored, so the window is exactly
    symmetric and both endpoints are exactly zero.
    """
    if M < 2:
        raise DegenerateWindow(f"Hanning window needs M >= 2, got {M}")
    half = (M + 1) // 2
    n = np.arange(half, dtype=np.float64)
    first = np.sin(np.pi * n / (M - 1)) ** 2
    first[0] = 0.0
    coeffs = np.concatenate([first, first[: M - half][::-1]])
    return WindowFunction(coeffs)


def frame_count(length: int, fft_size: int, hop: int) -> int:
    """Number of STFT frames for a signal of *length* samples."""
    if length < fft_size:
        return 1
    return (length - 1) // hop + 1


def stft(buf: AudioBuffer, fft_size: int, hop: int, window: WindowFunction) -> ComplexSpectrogram:
    """Short-time Fourier transform of *buf*.

    Parameters
    ----------
    buf:
        Mono input signal.
    fft_size:
        DFT length ``N``; must equal ``window.length``.
    hop:
        Frame advance ``H`` in samples.
    window:
        Analysis window applied to every frame.

    Returns
    -------
    ComplexSpectrogram
        ``frame_count(len(buf), N, H)`` frames of ``N/2 + 1`` bins.
    """
    if window.length != fft_size:
        raise GeometryMismatch(f"window length {window.length} != fft_size {fft_size}")
    if hop < 1:
        raise ValueError(f"hop must be >= 1, got {hop}")
    if len(buf) == 0:
        raise EmptySignal("cannot analyse an empty signal")

    n_frames = frame_count(len(buf), fft_size, hop)
    padded = np.zeros((n_frames - 1) * hop + fft_size, dtype=np.float64)
    padded[: min(len(buf), padded.size)] = buf.samples[: padded.size]
    frames = sliding_window_view(padded, fft_size)[::hop][:n_frames]
    bins = np.fft.rfft(frames * window.coefficients, n=fft_size, axis=1)
    log.debug("stft: %d samples -> %d frames x %d bins (N=%d, H=%d)", len(buf), n_frames, bins.shape[1], fft_size, hop)
    return ComplexSpectrogram(bins=bins, fft_size=fft_size, hop=hop, sample_rate=buf.sample_rate)


def power(spec: ComplexSpectrogram) -> PowerSpectrogram:
    """Elementwise energy ``re^2 + im^2``."""
    values = spec.bins.real ** 2 + spec.bins.imag ** 2
    return PowerSpectrogram(values=values, fft_size=spec.fft_size, hop=spec.hop, sample_rate=spec.sample_rate)


def onesided_energy(spec: ComplexSpectrogram) -> np.ndarray:
    """Per-frame energy of a one-sided spectrum, interior bins counted twice.

    For even ``N`` the DC and Nyquist bins appear once and every other
    bin twice, so the result equals ``N * sum((w * frame)**2)``.
    """
    p = power(spec).values
    weights = np.full(spec.num_bins, 2.0)
    weights[0] = 1.0
    if spec.fft_size % 2 == 0:
        weights[-1] = 1.0
    return p @ weights
