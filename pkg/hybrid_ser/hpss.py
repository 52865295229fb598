"""Harmonic/percussive separation of a Mel energy grid.

A horizontal (time-direction) median filter keeps sustained ridges and
suppresses transients; a vertical (band-direction) median filter does the
opposite. The two filtered grids are turned into masks that split each
cell of the input between a harmonic and a percussive component.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy.ndimage import median_filter

from hybrid_ser.errors import EvenKernel, GeometryMismatch, LogScaledInput
from hybrid_ser.melbank import MelSpectrogram

log = logging.getLogger(__name__)

MaskMode = Literal["soft", "binary"]


@dataclass(frozen=True)
class HpssConfig:
    """Median-filter kernels and masking parameters.

    Parameters
    ----------
    kernel_time:
        Horizontal median length in frames (harmonic enhancement).
    kernel_freq:
        Vertical median length in bands (percussive enhancement).
    power:
        Exponent ``p`` applied to the enhanced grids in soft masks.
    mask_mode:
        ``"soft"`` for Wiener-style ratios, ``"binary"`` for a hard split.
    epsilon:
        Added to the soft-mask denominator.
    use_masks:
        When ``False`` the median-filtered grids are returned as the
        components themselves instead of being turned into masks.
    """

    kernel_time: int = 31
    kernel_freq: int = 31
    power: float = 2.0
    mask_mode: MaskMode = "soft"
    epsilon: float = 1e-10
    use_masks: bool = True

    def __post_init__(self) -> None:
        for name in ("kernel_time", "kernel_freq"):
            k = getattr(self, name)
            if k % 2 == 0:
                raise EvenKernel(f"{name} must be odd, got {k}")
            if k < 3:
                raise ValueError(f"{name} must be >= 3, got {k}")
        if self.power <= 0:
            raise ValueError(f"power must be positive, got {self.power}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.mask_mode not in ("soft", "binary"):
            raise ValueError(f"mask_mode must be 'soft' or 'binary', got {self.mask_mode!r}")


@dataclass(frozen=True)
class HpssPair:
    """Harmonic and percussive components sharing the source geometry."""

    harmonic: MelSpectrogram
    percussive: MelSpectrogram

    def __post_init__(self) -> None:
        if self.harmonic.values.shape != self.percussive.values.shape:
            raise GeometryMismatch(
                f"harmonic {self.harmonic.values.shape} != percussive {self.percussive.values.shape}"
            )


def median_filter_1d(row: Sequence[float] | np.ndarray, kernel: int) -> np.ndarray:
    """Centred running median with reflect padding at both ends.

    ``kernel=1`` is the identity. The output has the input's length.
    """
    if kernel < 1 or kernel % 2 == 0:
        raise EvenKernel(f"median kernel must be odd and >= 1, got {kernel}")
    arr = np.asarray(row, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D sequence, got shape {arr.shape}")
    if kernel == 1 or arr.size == 0:
        return arr.copy()
    return median_filter(arr, size=kernel, mode="reflect")


def _enhance(values: np.ndarray, cfg: HpssConfig) -> tuple[np.ndarray, np.ndarray]:
    # values is (bands, frames): axis 1 is time, axis 0 is frequency.
    h_enh = median_filter(values, size=(1, cfg.kernel_time), mode="reflect")
    p_enh = median_filter(values, size=(cfg.kernel_freq, 1), mode="reflect")
    return h_enh, p_enh


def masks(h_enh: np.ndarray, p_enh: np.ndarray, cfg: HpssConfig) -> tuple[np.ndarray, np.ndarray]:
    """Harmonic and percussive masks from the two enhanced grids."""
    if cfg.mask_mode == "binary":
        mask_h = (h_enh >= p_enh).astype(np.float64)
        return mask_h, 1.0 - mask_h
    hp = h_enh ** cfg.power
    pp = p_enh ** cfg.power
    denom = hp + pp + cfg.epsilon
    return hp / denom, pp / denom


def decompose(S: MelSpectrogram, cfg: HpssConfig | None = None) -> HpssPair:
    """Split a linear-energy Mel grid into harmonic and percussive parts.

    Parameters
    ----------
    S:
        Mel energies, ``(bands, frames)``, not log-scaled.
    cfg:
        Kernels and masking; defaults to :class:`HpssConfig()`.

    Raises
    ------
    LogScaledInput
        *S* has already been log-compressed.
    """
    if S.log_scaled:
        raise LogScaledInput("HPSS operates on Mel energies, not log-Mel values")
    cfg = cfg or HpssConfig()
    values = S.values
    h_enh, p_enh = _enhance(values, cfg)

    if cfg.use_masks:
        mask_h, mask_p = masks(h_enh, p_enh, cfg)
        harmonic, percussive = values * mask_h, values * mask_p
    else:
        harmonic, percussive = h_enh, p_enh

    log.debug(
        "hpss %dx%d kernels=(%d,%d) mode=%s masks=%s",
        S.band_count, S.frame_count, cfg.kernel_time, cfg.kernel_freq, cfg.mask_mode, cfg.use_masks,
    )
    return HpssPair(
        harmonic=MelSpectrogram(values=harmonic, sample_rate=S.sample_rate),
        percussive=MelSpectrogram(values=percussive, sample_rate=S.sample_rate),
    )


def averaged_hp(pair: HpssPair) -> MelSpectrogram:
    """Elementwise mean of the two components, ``(H + P) / 2``."""
    return MelSpectrogram(
        values=(pair.harmonic.values + pair.percussive.values) / 2.0,
        sample_rate=pair.harmonic.sample_rate,
    )
