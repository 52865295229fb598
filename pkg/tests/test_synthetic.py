"""Unit tests for the synthetic corpus generator."""

from __future__ import annotations

import numpy as np
import pytest

from hybrid_ser.audio_io import read_wav
from hybrid_ser.featuremap import EmotionLabel
from hybrid_ser.manifest import parse_manifest
from hybrid_ser.synthetic import SYNTH_LABELS, generate_corpus, synth_clip


@pytest.mark.parametrize("kind", list(SYNTH_LABELS))
def test_clip_is_peak_normalised(kind):
    x = synth_clip(kind, np.random.default_rng(0), 8000, 0.5)
    assert x.size == 4000
    assert np.max(np.abs(x)) == pytest.approx(0.9, abs=0.01)


def test_unknown_kind():
    with pytest.raises(ValueError):
        synth_clip("speech", np.random.default_rng(0))


def test_generate_corpus(tmp_path):
    manifest, rows = generate_corpus(tmp_path, clips=8, seed=1, sample_rate=8000, duration=0.3, speakers=3)
    assert manifest == tmp_path / "manifest.csv"
    assert [r.label for r in rows[:4]] == [
        EmotionLabel.NEUTRAL, EmotionLabel.ANGER, EmotionLabel.HAPPINESS, EmotionLabel.SADNESS,
    ]
    assert [r.speaker for r in rows[:4]] == ["s00", "s01", "s02", "s00"]
    parsed = parse_manifest(manifest)
    assert [(r.path.resolve(), r.label) for r in parsed] == [(r.path.resolve(), r.label) for r in rows]
    buf = read_wav(rows[0].path)
    assert buf.sample_rate == 8000 and len(buf) == 2400


def test_generate_corpus_is_seeded(tmp_path):
    _, a = generate_corpus(tmp_path / "a", clips=4, seed=3, sample_rate=8000, duration=0.2)
    _, b = generate_corpus(tmp_path / "b", clips=4, seed=3, sample_rate=8000, duration=0.2)
    for ra, rb in zip(a, b):
        assert ra.path.read_bytes() == rb.path.read_bytes()


def _high_share(x, sample_rate, cutoff=4000.0):
    energy = np.abs(np.fft.rfft(x)) ** 2
    freqs = np.fft.rfftfreq(x.size, 1.0 / sample_rate)
    return energy[freqs > cutoff].sum() / energy.sum()


def test_mixed_clip_has_broadband_energy_in_every_frame():
    x = synth_clip("mixed", np.random.default_rng(0), 16000, 1.0)
    frames = x[: 15 * 1024].reshape(15, 1024)
    assert min(_high_share(f, 16000) for f in frames) > 0.1


def test_harmonic_clip_stays_narrowband():
    x = synth_clip("harmonic", np.random.default_rng(0), 16000, 1.0)
    assert _high_share(x, 16000) < 0.01
