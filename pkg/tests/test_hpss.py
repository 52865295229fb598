"""Unit tests for median-filter harmonic/percussive separation."""

from __future__ import annotations

import numpy as np
import pytest

from hybrid_ser.errors import EvenKernel, GeometryMismatch, LogScaledInput
from hybrid_ser.hpss import HpssConfig, HpssPair, averaged_hp, decompose, masks, median_filter_1d
from hybrid_ser.melbank import MelSpectrogram


def _ridge_grid() -> MelSpectrogram:
    """Band 10 sustained over all frames, frame 20 lit over all bands."""
    values = np.full((32, 40), 1e-3)
    values[10, :] = 1.0
    values[:, 20] = 1.0
    return MelSpectrogram(values, 8000)


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------

def test_config_defaults():
    cfg = HpssConfig()
    assert (cfg.kernel_time, cfg.kernel_freq, cfg.power, cfg.mask_mode) == (31, 31, 2.0, "soft")


def test_config_rejects_even_kernel():
    with pytest.raises(EvenKernel):
        HpssConfig(kernel_time=30)


@pytest.mark.parametrize("kwargs", [{"kernel_freq": 1}, {"power": 0.0}, {"epsilon": 0.0}, {"mask_mode": "hard"}])
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        HpssConfig(**kwargs)


# ---------------------------------------------------------------------------
# Median filter
# ---------------------------------------------------------------------------

def test_median_filter_reflects_at_edges():
    np.testing.assert_array_equal(median_filter_1d([1, 2, 3, 10, 4], 3), [1, 2, 3, 4, 4])
    np.testing.assert_array_equal(median_filter_1d([5, 1, 1, 1, 9], 3), [5, 1, 1, 1, 9])


def test_median_filter_removes_isolated_spike():
    row = np.zeros(21)
    row[10] = 100.0
    np.testing.assert_array_equal(median_filter_1d(row, 5), np.zeros(21))


def test_median_filter_kernel_one_is_identity():
    row = np.array([3.0, 1.0, 2.0])
    out = median_filter_1d(row, 1)
    np.testing.assert_array_equal(out, row)
    assert out is not row


def test_median_filter_rejects_even_kernel():
    with pytest.raises(EvenKernel):
        median_filter_1d([1.0, 2.0], 4)


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------

def test_decompose_separates_ridge_from_onset():
    pair = decompose(_ridge_grid(), HpssConfig(kernel_time=9, kernel_freq=9))
    h, p = pair.harmonic.values, pair.percussive.values
    assert h[10, 5] > 0.9 and p[10, 5] < 0.1
    assert p[3, 20] > 0.9 and h[3, 20] < 0.1


def test_soft_masks_sum_to_input():
    rng = np.random.default_rng(0)
    S = MelSpectrogram(rng.uniform(0.1, 1.0, size=(16, 24)), 8000)
    pair = decompose(S, HpssConfig(kernel_time=5, kernel_freq=5))
    np.testing.assert_allclose(pair.harmonic.values + pair.percussive.values, S.values, rtol=1e-6)


def test_binary_masks_are_complementary():
    rng = np.random.default_rng(1)
    h, p = rng.random((8, 8)), rng.random((8, 8))
    mh, mp = masks(h, p, HpssConfig(kernel_time=3, kernel_freq=3, mask_mode="binary"))
    assert set(np.unique(mh)) <= {0.0, 1.0}
    np.testing.assert_array_equal(mh + mp, 1.0)
    np.testing.assert_array_equal(mh, (h >= p).astype(float))


def test_decompose_without_masks_returns_median_grids():
    S = _ridge_grid()
    pair = decompose(S, HpssConfig(kernel_time=9, kernel_freq=9, use_masks=False))
    assert pair.harmonic.values[10, 20] == pytest.approx(1.0)
    assert pair.percussive.values[10, 5] == pytest.approx(1e-3)


def test_decompose_preserves_shape_and_rate():
    pair = decompose(_ridge_grid(), HpssConfig(kernel_time=3, kernel_freq=3))
    assert pair.harmonic.values.shape == (32, 40)
    assert pair.percussive.sample_rate == 8000
    assert not pair.harmonic.log_scaled


def test_decompose_rejects_log_input():
    with pytest.raises(LogScaledInput):
        decompose(MelSpectrogram(np.zeros((4, 4)), 8000, log_scaled=True))


def test_pair_rejects_shape_mismatch():
    with pytest.raises(GeometryMismatch):
        HpssPair(MelSpectrogram(np.zeros((4, 4)), 8000), MelSpectrogram(np.zeros((4, 5)), 8000))


def test_averaged_hp_is_mean():
    pair = HpssPair(MelSpectrogram(np.full((2, 2), 4.0), 8000), MelSpectrogram(np.full((2, 2), 2.0), 8000))
    np.testing.assert_array_equal(averaged_hp(pair).values, 3.0)


# ---------------------------------------------------------------------------
# Full-size grids
# ---------------------------------------------------------------------------

def test_sustained_tone_goes_to_harmonic():
    values = np.zeros((128, 128))
    values[40, :] = 1.0
    pair = decompose(MelSpectrogram(values, 88200))
    assert pair.harmonic.values.sum() >= 0.9 * values.sum()


def test_broadband_impulse_goes_to_percussive():
    values = np.zeros((128, 128))
    values[:, 64] = 1.0
    pair = decompose(MelSpectrogram(values, 88200))
    assert pair.percussive.values.sum() >= 0.9 * values.sum()


def test_soft_reconstruction_on_full_grid():
    rng = np.random.default_rng(3)
    values = rng.exponential(1.0, size=(128, 128))
    pair = decompose(MelSpectrogram(values, 88200))
    total = pair.harmonic.values + pair.percussive.values
    keep = values > 1e-8
    np.testing.assert_allclose(total[keep], values[keep], rtol=1e-6)


def test_binary_average_is_exactly_half():
    rng = np.random.default_rng(4)
    S = MelSpectrogram(rng.exponential(1.0, size=(128, 128)), 88200)
    avg = averaged_hp(decompose(S, HpssConfig(mask_mode="binary")))
    np.testing.assert_array_equal(avg.values, S.values / 2.0)


def test_constant_grid_splits_evenly():
    pair = decompose(MelSpectrogram(np.full((16, 24), 2.0), 8000), HpssConfig(kernel_time=9, kernel_freq=9))
    np.testing.assert_allclose(pair.harmonic.values, 1.0, rtol=1e-9)
    np.testing.assert_allclose(pair.percussive.values, 1.0, rtol=1e-9)


@pytest.mark.parametrize("use_masks", [True, False])
def test_decompose_is_scale_invariant(use_masks):
    values = np.random.default_rng(5).uniform(1.0, 10.0, (32, 40))
    cfg = HpssConfig(kernel_time=9, kernel_freq=5, use_masks=use_masks)
    pair = decompose(MelSpectrogram(values, 8000), cfg)
    scaled = decompose(MelSpectrogram(4.0 * values, 8000), cfg)
    np.testing.assert_allclose(scaled.harmonic.values, 4.0 * pair.harmonic.values, rtol=1e-9)
    np.testing.assert_allclose(scaled.percussive.values, 4.0 * pair.percussive.values, rtol=1e-9)


def test_transpose_swaps_components():
    values = np.random.default_rng(6).uniform(0.0, 1.0, (32, 40))
    pair = decompose(MelSpectrogram(values, 8000), HpssConfig(kernel_time=9, kernel_freq=5))
    flipped = decompose(MelSpectrogram(values.T, 8000), HpssConfig(kernel_time=5, kernel_freq=9))
    np.testing.assert_allclose(flipped.harmonic.values, pair.percussive.values.T, rtol=1e-12)
    np.testing.assert_allclose(flipped.percussive.values, pair.harmonic.values.T, rtol=1e-12)
