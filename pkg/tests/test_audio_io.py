"""Unit tests for WAV decoding and resampling."""

from __future__ import annotations

import struct

import numpy as np
import pytest

from hybrid_ser.audio_io import AudioBuffer, decode_wav, read_wav, resample
from hybrid_ser.errors import MalformedHeader, TruncatedData, UnsupportedEncoding
from tests.helpers import sine, wav_bytes, write_pcm16


# ---------------------------------------------------------------------------
# AudioBuffer
# ---------------------------------------------------------------------------

def test_buffer_rejects_bad_rate():
    with pytest.raises(ValueError):
        AudioBuffer(np.zeros(4), 0)


def test_buffer_rejects_2d_samples():
    with pytest.raises(ValueError):
        AudioBuffer(np.zeros((4, 2)), 8000)


@pytest.mark.parametrize("bad", [np.nan, np.inf, 1.5, -1.0001])
def test_buffer_rejects_out_of_range_samples(bad):
    with pytest.raises(ValueError):
        AudioBuffer(np.array([0.0, bad, 0.0]), 8000)


def test_buffer_accepts_full_scale():
    assert len(AudioBuffer(np.array([-1.0, 0.0, 1.0]), 8000)) == 3


def test_buffer_samples_are_read_only():
    buf = AudioBuffer(np.zeros(4), 8000)
    with pytest.raises(ValueError):
        buf.samples[0] = 1.0


def test_buffer_duration():
    assert AudioBuffer(np.zeros(16000), 8000).duration == pytest.approx(2.0)


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------

def test_decode_pcm16_scaling():
    buf = decode_wav(wav_bytes(np.array([0, 16384, -32768, 32767]), 8000))
    assert buf.sample_rate == 8000
    np.testing.assert_allclose(buf.samples, [0.0, 0.5, -1.0, 32767 / 32768])


def test_decode_pcm8_is_offset():
    buf = decode_wav(wav_bytes(np.array([128, 0, 255]), 8000, bits=8))
    np.testing.assert_allclose(buf.samples, [0.0, -1.0, 127 / 128])


def test_decode_pcm24_sign_extension():
    buf = decode_wav(wav_bytes(np.array([-8388608, 4194304, -1]), 8000, bits=24))
    np.testing.assert_allclose(buf.samples, [-1.0, 0.5, -1 / 8388608])


def test_decode_pcm32():
    buf = decode_wav(wav_bytes(np.array([-2147483648, 1073741824]), 8000, bits=32))
    np.testing.assert_allclose(buf.samples, [-1.0, 0.5])


def test_decode_float32_clips():
    buf = decode_wav(wav_bytes(np.array([0.25, 2.0, -3.0]), 8000, bits=32, fmt_tag=3))
    np.testing.assert_allclose(buf.samples, [0.25, 1.0, -1.0])


def test_decode_stereo_averages_to_mono():
    frames = np.array([[16384, 0], [-16384, -16384]])
    buf = decode_wav(wav_bytes(frames, 8000))
    np.testing.assert_allclose(buf.samples, [0.25, -0.5])


def test_decode_skips_unknown_chunks():
    odd_chunk = b"LIST" + struct.pack("<I", 3) + b"abc" + b"\x00"
    buf = decode_wav(wav_bytes(np.array([0, 16384]), 8000, extra_chunks=odd_chunk))
    np.testing.assert_allclose(buf.samples, [0.0, 0.5])


def test_decode_rejects_non_riff():
    with pytest.raises(MalformedHeader):
        decode_wav(b"RIFX" + b"\x00" * 40)


def test_decode_rejects_missing_data_chunk():
    data = wav_bytes(np.array([1, 2]), 8000)
    cut = data.index(b"data")
    with pytest.raises(MalformedHeader):
        decode_wav(data[:cut])


def test_decode_rejects_compressed_codec():
    with pytest.raises(UnsupportedEncoding):
        decode_wav(wav_bytes(np.array([1, 2]), 8000, fmt_tag=2))


def test_decode_rejects_truncated_payload():
    data = wav_bytes(np.arange(100), 8000)
    with pytest.raises(TruncatedData):
        decode_wav(data[:-20])


def test_read_wav_from_disk(tmp_path):
    x = sine(440.0, 0.1, 8000)
    path = write_pcm16(tmp_path / "tone.wav", x, 8000)
    buf = read_wav(path)
    assert len(buf) == x.size
    np.testing.assert_allclose(buf.samples, x, atol=1 / 32768 + 1e-9)


# ---------------------------------------------------------------------------
# Resampling
# ---------------------------------------------------------------------------

def test_resample_same_rate_is_identity():
    buf = AudioBuffer(np.zeros(10), 8000)
    assert resample(buf, 8000) is buf


def test_resample_preserves_duration():
    buf = AudioBuffer(sine(200.0, 0.5, 16000), 16000)
    out = resample(buf, 88200)
    assert out.sample_rate == 88200
    assert abs(out.duration - buf.duration) <= 1 / 88200 + 1e-12


def test_resample_keeps_in_band_tone():
    sr_in, sr_out = 16000, 44100
    buf = AudioBuffer(sine(1000.0, 1.0, sr_in), sr_in)
    out = resample(buf, sr_out)
    expected = sine(1000.0, 1.0, sr_out)
    n = min(len(out), expected.size)
    middle = slice(n // 4, 3 * n // 4)
    np.testing.assert_allclose(out.samples[middle], expected[middle], atol=1e-2)


def test_resample_down_removes_content_above_nyquist():
    buf = AudioBuffer(sine(6000.0, 1.0, 16000), 16000)
    out = resample(buf, 8000)
    middle = out.samples[len(out) // 4 : 3 * len(out) // 4]
    assert np.sqrt(np.mean(middle ** 2)) < 1e-2


def test_resample_keeps_dc_level():
    out = resample(AudioBuffer(np.full(16000, 0.5), 16000), 44100)
    middle = out.samples[len(out) // 4 : 3 * len(out) // 4]
    np.testing.assert_allclose(middle, 0.5, atol=1e-3)


def test_resample_up_has_no_spurs_above_minus_60_db():
    out = resample(AudioBuffer(sine(1000.0, 2.0, 22050), 22050), 88200)
    segment = out.samples[22050 : 22050 + 88200]
    energy = np.abs(np.fft.rfft(segment)) ** 2
    assert int(np.argmax(energy)) == 1000
    others = np.delete(energy, np.arange(998, 1003))
    assert others.max() <= 1e-6 * energy[1000]


def test_resample_rejects_bad_rate():
    with pytest.raises(ValueError):
        resample(AudioBuffer(np.zeros(4), 8000), 0)
