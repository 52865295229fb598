"""Fixed-length embeddings of feature maps and the EMB2 exchange file.

:func:`pool_embed` average-pools every channel onto a coarse grid so any
map geometry becomes a 2048-value vector. Vectors computed elsewhere (for
example by a pretrained network) can be brought in through EMB2 files.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from hybrid_ser.errors import CorruptFile, GeometryMismatch, WrongDimension
from hybrid_ser.featuremap import UNLABELED, EmotionLabel, FeatureMap
from hybrid_ser.formats import BinaryReader, BinaryWriter, read_framed

log = logging.getLogger(__name__)

EMBEDDING_DIM = 2048
POOL_ROWS = 32

EMB2_MAGIC = b"EMB2"
EMB2_VERSION = 1


def pooling_matrix(n: int, g: int) -> np.ndarray:
    """``(g, n)`` averaging operator splitting ``n`` cells into ``g`` windows.

    Window ``i`` spans ``[floor(i*n/g), ceil((i+1)*n/g))``, widened to at
    least one cell, so windows partition the axis as evenly as possible.
    """
    P = np.zeros((g, n), dtype=np.float64)
    for i in range(g):
        start = (i * n) // g
        stop = max(math.ceil((i + 1) * n / g), start + 1)
        P[i, start:stop] = 1.0 / (stop - start)
    return P


def pool_embed(fmap: FeatureMap) -> np.ndarray:
    """Average-pool *fmap* into a float32 vector of :data:`EMBEDDING_DIM` values.

    Two-channel maps give two 32x32 grids, one-channel maps a single 32x64
    grid; grids are flattened row-major and concatenated channel-major.
    """
    c = fmap.num_channels
    if c not in (1, 2):
        raise GeometryMismatch(f"pool_embed handles 1 or 2 channels, got {c}")
    cols = EMBEDDING_DIM // (POOL_ROWS * c)
    rows_op = pooling_matrix(fmap.bands, POOL_ROWS)
    cols_op = pooling_matrix(fmap.frames, cols)
    grids = [rows_op @ ch.astype(np.float64) @ cols_op.T for ch in fmap.channels]
    return np.concatenate([g.ravel() for g in grids]).astype(np.float32)


def embed_maps(maps: Sequence[FeatureMap]) -> list[tuple[np.ndarray, EmotionLabel | None]]:
    return [(pool_embed(m), m.label) for m in maps]


# ---------------------------------------------------------------------------
# EMB2 files
# ---------------------------------------------------------------------------

def export_embeddings(
    records: Sequence[tuple[np.ndarray, EmotionLabel | None]],
    path: str | Path,
    dim: int = EMBEDDING_DIM,
) -> None:
    """Write ``(vector, label)`` pairs to an EMB2 file."""
    w = BinaryWriter(EMB2_MAGIC, EMB2_VERSION)
    w.pack("II", dim, len(records))
    for vec, label in records:
        vec = np.asarray(vec)
        if vec.shape != (dim,):
            raise WrongDimension(f"embedding has shape {vec.shape}, expected ({dim},)")
        w.pack("B", UNLABELED if label is None else int(label))
        w.array(vec, "<f4")
    w.write(path)
    log.info("wrote %d embeddings to %s", len(records), path)


def _read_embeddings(r: BinaryReader) -> list[tuple[np.ndarray, EmotionLabel | None]]:
    dim, count = r.unpack("II")
    if dim != EMBEDDING_DIM:
        raise WrongDimension(f"file declares dimension {dim}, expected {EMBEDDING_DIM}")
    records: list[tuple[np.ndarray, EmotionLabel | None]] = []
    for _ in range(count):
        (code,) = r.unpack("B")
        if code != UNLABELED and code >= len(EmotionLabel):
            raise CorruptFile(f"label code {code} is not an emotion class")
        vec = r.array("<f4", dim)
        if not np.all(np.isfinite(vec)):
            raise CorruptFile("embedding holds non-finite values")
        records.append((vec, None if code == UNLABELED else EmotionLabel(code)))
    r.expect_end()
    return records


def import_embeddings(path: str | Path) -> list[tuple[np.ndarray, EmotionLabel | None]]:
    """Read an EMB2 file.

    Raises
    ------
    CorruptFile
        Bad magic, checksum or body.
    WrongDimension
        The file declares a vector length other than 2048.
    """
    return _read_embeddings(read_framed(path, EMB2_MAGIC, (EMB2_VERSION,)))
