"""WAV decoding and band-limited resampling.

Decodes RIFF/WAVE containers holding integer PCM (8/16/24/32-bit) or
32-bit IEEE float into a mono :class:`AudioBuffer`, and resamples buffers
to the analysis rate with a Kaiser-windowed sinc filter.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass
from math import gcd
from pathlib import Path

import numpy as np
from scipy.signal import firwin, resample_poly

from hybrid_ser.errors import MalformedHeader, TruncatedData, UnsupportedEncoding

log = logging.getLogger(__name__)

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE

# Resampler quality: sinc zero crossings per side and Kaiser beta.
RESAMPLE_ZERO_CROSSINGS = 64
RESAMPLE_KAISER_BETA = 12.0


@dataclass(frozen=True)
class AudioBuffer:
    """Mono samples in ``[-1, 1]`` at ``sample_rate`` Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        arr = np.array(self.samples, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("AudioBuffer samples must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("AudioBuffer samples must be finite")
        if arr.size and np.max(np.abs(arr)) > 1.0:
            raise ValueError(f"AudioBuffer samples must lie in [-1, 1], peak is {np.max(np.abs(arr)):.4g}")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    @property
    def duration(self) -> float:
        """Length in seconds."""
        return len(self) / self.sample_rate


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Format:
    tag: int
    channels: int
    sample_rate: int
    block_align: int
    bits: int


def _parse_fmt(body: bytes) -> _Format:
    if len(body) < 16:
        raise MalformedHeader(f"fmt chunk too short ({len(body)} bytes)")
    tag, channels, rate, _byte_rate, block_align, bits = struct.unpack_from("<HHIIHH", body)
    if tag == WAVE_FORMAT_EXTENSIBLE:
        # cbSize(2) validBits(2) channelMask(4) then the sub-format GUID,
        # whose first two bytes are the real format tag.
        if len(body) < 26:
            raise MalformedHeader("WAVE_FORMAT_EXTENSIBLE fmt chunk too short")
        (tag,) = struct.unpack_from("<H", body, 24)
    if channels == 0 or rate == 0:
        raise MalformedHeader(f"invalid fmt chunk: channels={channels} rate={rate}")
    return _Format(tag=tag, channels=channels, sample_rate=rate, block_align=block_align, bits=bits)


def _to_float(raw: bytes, fmt: _Format) -> np.ndarray:
    """Convert interleaved raw sample bytes into a (frames, channels) float array."""
    width = fmt.bits // 8
    frame_bytes = width * fmt.channels
    n_frames = len(raw) // frame_bytes
    raw = raw[: n_frames * frame_bytes]

    if fmt.tag == WAVE_FORMAT_IEEE_FLOAT:
        if fmt.bits != 32:
            raise UnsupportedEncoding(f"{fmt.bits}-bit float PCM is not supported")
        data = np.frombuffer(raw, dtype="<f4").astype(np.float64)
        data = np.clip(np.nan_to_num(data, nan=0.0, posinf=1.0, neginf=-1.0), -1.0, 1.0)
    elif fmt.tag == WAVE_FORMAT_PCM:
        if fmt.bits == 8:
            data = (np.frombuffer(raw, dtype=np.uint8).astype(np.float64) - 128.0) / 128.0
        elif fmt.bits == 16:
            data = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
        elif fmt.bits == 24:
            b = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
            ints = b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)
            ints = np.where(ints & 0x800000, ints - (1 << 24), ints)
            data = ints.astype(np.float64) / 8388608.0
        elif fmt.bits == 32:
            data = np.frombuffer(raw, dtype="<i4").astype(np.float64) / 2147483648.0
        else:
            raise UnsupportedEncoding(f"{fmt.bits}-bit integer PCM is not supported")
    else:
        raise UnsupportedEncoding(f"WAV format tag 0x{fmt.tag:04x} is not PCM or IEEE float")

    return data.reshape(n_frames, fmt.channels)


def decode_wav(data: bytes) -> AudioBuffer:
    """Decode a RIFF/WAVE byte string into a mono :class:`AudioBuffer`.

    Multi-channel audio is averaged to mono. Integer PCM is scaled by
    ``2**(bits-1)`` (8-bit is offset by 128 first), so full-scale
    positive values land just below 1.0.

    Raises
    ------
    MalformedHeader
        Not a RIFF/WAVE container, or the fmt/data chunks are missing.
    UnsupportedEncoding
        Compressed codecs or unsupported sample widths.
    TruncatedData
        A chunk declares more bytes than the file holds.
    """
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedHeader("not a RIFF/WAVE container")

    fmt: _Format | None = None
    payload: bytes | None = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body_start = pos + 8
        body_end = body_start + size
        if chunk_id == b"data":
            if body_end > len(data):
                raise TruncatedData(
                    f"data chunk declares {size} bytes but only {len(data) - body_start} remain"
                )
            payload = data[body_start:body_end]
        elif chunk_id == b"fmt ":
            if body_end > len(data):
                raise TruncatedData("fmt chunk runs past end of file")
            fmt = _parse_fmt(data[body_start:body_end])
        pos = body_end + (size & 1)

    if fmt is None:
        raise MalformedHeader("missing fmt chunk")
    if payload is None:
        raise MalformedHeader("missing data chunk")
    if fmt.bits % 8 != 0 or fmt.bits == 0:
        raise UnsupportedEncoding(f"sample width of {fmt.bits} bits is not byte aligned")

    frames = _to_float(payload, fmt)
    if frames.shape[0] == 0:
        raise TruncatedData("data chunk holds no complete sample frame")
    mono = frames.mean(axis=1) if fmt.channels > 1 else frames[:, 0]
    log.debug(
        "decoded %d frames x %d channels @ %d Hz (%d-bit, tag 0x%04x)",
        frames.shape[0], fmt.channels, fmt.sample_rate, fmt.bits, fmt.tag,
    )
    return AudioBuffer(samples=mono, sample_rate=fmt.sample_rate)


def read_wav(path: str | Path) -> AudioBuffer:
    """Read and decode a WAV file from disk."""
    return decode_wav(Path(path).read_bytes())


# ---------------------------------------------------------------------------
# Resampling
# ---------------------------------------------------------------------------

def _sinc_taps(up: int, down: int, zero_crossings: int, beta: float) -> np.ndarray:
    """Low-pass prototype at the upsampled rate, cut off at the lower Nyquist."""
    max_rate = max(up, down)
    half_len = zero_crossings * max_rate
    return firwin(2 * half_len + 1, 1.0 / max_rate, window=("kaiser", beta))


def resample(
    buf: AudioBuffer,
    target_rate: int,
    zero_crossings: int = RESAMPLE_ZERO_CROSSINGS,
    beta: float = RESAMPLE_KAISER_BETA,
) -> AudioBuffer:
    """Resample *buf* to *target_rate* Hz with windowed-sinc interpolation.

    Returns *buf* itself when the rates already match. Otherwise the
    output has ``ceil(len * target / source)`` samples, which keeps the
    duration within one output sample period.
    """
    if target_rate <= 0:
        raise ValueError(f"target_rate must be positive, got {target_rate}")
    if target_rate == buf.sample_rate:
        return buf

    g = gcd(buf.sample_rate, target_rate)
    up, down = target_rate // g, buf.sample_rate // g
    taps = _sinc_taps(up, down, zero_crossings, beta)
    out = resample_poly(buf.samples, up, down, window=taps)
    log.debug("resampled %d -> %d Hz (up=%d down=%d, %d taps)", buf.sample_rate, target_rate, up, down, taps.size)
    return AudioBuffer(samples=np.clip(out, -1.0, 1.0), sample_rate=target_rate)
