"""Unit tests for pooled embeddings and EMB2 files."""

from __future__ import annotations

import numpy as np
import pytest

from hybrid_ser.classifier.embedding import (
    EMB2_MAGIC,
    EMBEDDING_DIM,
    embed_maps,
    export_embeddings,
    import_embeddings,
    pool_embed,
    pooling_matrix,
)
from hybrid_ser.errors import CorruptFile, GeometryMismatch, WrongDimension
from hybrid_ser.featuremap import EmotionLabel, FeatureMap
from hybrid_ser.formats import BinaryWriter


def test_pooling_matrix_rows_average():
    P = pooling_matrix(128, 32)
    assert P.shape == (32, 128)
    np.testing.assert_allclose(P.sum(axis=1), 1.0)
    np.testing.assert_allclose(P[0, :4], 0.25)


def test_pooling_matrix_upsamples_small_axes():
    P = pooling_matrix(13, 32)
    np.testing.assert_allclose(P.sum(axis=1), 1.0)
    assert np.all((P > 0).sum(axis=1) >= 1)


def test_pool_embed_two_channels():
    ch = np.zeros((2, 128, 128))
    ch[1] = 1.0
    vec = pool_embed(FeatureMap(ch))
    assert vec.shape == (EMBEDDING_DIM,) and vec.dtype == np.float32
    np.testing.assert_array_equal(vec[:1024], 0.0)
    np.testing.assert_array_equal(vec[1024:], 1.0)


def test_pool_embed_one_channel_and_odd_geometry():
    rng = np.random.default_rng(0)
    vec = pool_embed(FeatureMap(rng.random((1, 13, 32))))
    assert vec.shape == (EMBEDDING_DIM,)
    assert 0.0 <= vec.min() and vec.max() <= 1.0


def test_pool_embed_preserves_mean_on_divisible_grid():
    rng = np.random.default_rng(1)
    ch = rng.random((2, 64, 64))
    vec = pool_embed(FeatureMap(ch))
    assert vec[:1024].mean() == pytest.approx(ch[0].mean(), rel=1e-5)


def test_pool_embed_rejects_three_channels():
    with pytest.raises(GeometryMismatch):
        pool_embed(FeatureMap(np.zeros((3, 8, 8))))


def test_embed_maps_keeps_labels():
    maps = [FeatureMap(np.zeros((2, 8, 8)), EmotionLabel.FEAR), FeatureMap(np.zeros((2, 8, 8)))]
    assert [lbl for _, lbl in embed_maps(maps)] == [EmotionLabel.FEAR, None]


def test_emb2_round_trip(tmp_path, rng):
    records = [(rng.random(EMBEDDING_DIM).astype(np.float32), EmotionLabel(i % 7)) for i in range(10)]
    records.append((np.zeros(EMBEDDING_DIM, dtype=np.float32), None))
    path = tmp_path / "e.emb2"
    export_embeddings(records, path)
    back = import_embeddings(path)
    assert [lbl for _, lbl in back] == [lbl for _, lbl in records]
    for (a, _), (b, _) in zip(records, back):
        np.testing.assert_array_equal(a, b)


def test_export_rejects_wrong_vector_length(tmp_path):
    with pytest.raises(WrongDimension):
        export_embeddings([(np.zeros(100), EmotionLabel.ANGER)], tmp_path / "e.emb2")


def test_import_rejects_other_dimension(tmp_path):
    path = tmp_path / "e.emb2"
    export_embeddings([(np.zeros(16), EmotionLabel.ANGER)], path, dim=16)
    with pytest.raises(WrongDimension):
        import_embeddings(path)


def test_import_rejects_non_finite(tmp_path):
    path = tmp_path / "e.emb2"
    w = BinaryWriter(EMB2_MAGIC, 1)
    w.pack("II", EMBEDDING_DIM, 1)
    w.pack("B", 0)
    w.array(np.full(EMBEDDING_DIM, np.inf), "<f4")
    w.write(path)
    with pytest.raises(CorruptFile):
        import_embeddings(path)


def test_import_detects_damage(tmp_path):
    path = tmp_path / "e.emb2"
    export_embeddings([(np.ones(EMBEDDING_DIM), EmotionLabel.SADNESS)], path)
    data = bytearray(path.read_bytes())
    data[20] ^= 0xFF
    path.write_bytes(bytes(data))
    with pytest.raises(CorruptFile):
        import_embeddings(path)
