"""Signal and WAV builders shared by the tests."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np


def wav_bytes(
    frames: np.ndarray,
    sample_rate: int,
    bits: int = 16,
    fmt_tag: int = 1,
    extra_chunks: bytes = b"",
) -> bytes:
    """Build a RIFF/WAVE byte string from already-encoded sample values.

    *frames* is ``(n,)`` or ``(n, channels)`` of the on-disk values.
    """
    frames = np.asarray(frames)
    if frames.ndim == 1:
        frames = frames[:, None]
    channels = frames.shape[1]
    width = bits // 8
    if fmt_tag == 3:
        payload = frames.astype("<f4").tobytes()
    elif bits == 8:
        payload = frames.astype(np.uint8).tobytes()
    elif bits == 16:
        payload = frames.astype("<i2").tobytes()
    elif bits == 24:
        ints = frames.astype(np.int64).reshape(-1) & 0xFFFFFF
        payload = np.stack([ints & 0xFF, (ints >> 8) & 0xFF, (ints >> 16) & 0xFF], axis=1).astype(np.uint8).tobytes()
    elif bits == 32:
        payload = frames.astype("<i4").tobytes()
    else:
        raise ValueError(bits)
    fmt = struct.pack("<HHIIHH", fmt_tag, channels, sample_rate, sample_rate * channels * width, channels * width, bits)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + extra_chunks
    body += b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) % 2:
        body += b"\x00"
    return b"RIFF" + struct.pack("<I", len(body)) + body


def pcm16(x: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(np.asarray(x) * 32767.0), -32768, 32767).astype(np.int16)


def write_pcm16(path: Path, x: np.ndarray, sample_rate: int) -> Path:
    path.write_bytes(wav_bytes(pcm16(x), sample_rate))
    return path


def sine(freq: float, seconds: float, sample_rate: int, amplitude: float = 0.5) -> np.ndarray:
    t = np.arange(int(round(seconds * sample_rate))) / sample_rate
    return amplitude * np.sin(2 * np.pi * freq * t)
