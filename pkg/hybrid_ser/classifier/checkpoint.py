"""MLPC model checkpoints.

Layout after the common header: layer count u16, layer sizes u32 each,
activation u8, one f64 dropout rate per hidden layer, seed i64, Adam step
u64, then every parameter as little-endian f64 in ``[W0, b0, W1, ...]``
order, followed by the Adam first moments and second moments in the same
order.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from hybrid_ser.classifier.mlp import AdamState, MlpModel
from hybrid_ser.errors import CorruptFile
from hybrid_ser.formats import BinaryReader, BinaryWriter, read_framed

log = logging.getLogger(__name__)

MLPC_MAGIC = b"MLPC"
MLPC_VERSION = 1

_ACTIVATIONS = ("relu", "identity")


def model_to_bytes(model: MlpModel) -> bytes:
    w = BinaryWriter(MLPC_MAGIC, MLPC_VERSION)
    w.pack("H", len(model.layer_sizes))
    w.pack(f"{len(model.layer_sizes)}I", *model.layer_sizes)
    w.pack("B", _ACTIVATIONS.index(model.activation))
    w.pack(f"{len(model.dropout)}d", *model.dropout)
    w.pack("qQ", model.seed, model.adam.step)
    for group in (model.params, model.adam.m, model.adam.v):
        for arr in group:
            w.array(arr, "<f8")
    return w.to_bytes()


def _shapes(sizes: tuple[int, ...]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        out.extend(((fan_in, fan_out), (fan_out,)))
    return out


def _read_model(r: BinaryReader) -> MlpModel:
    (n,) = r.unpack("H")
    if n < 2:
        raise CorruptFile(f"checkpoint declares {n} layer sizes")
    sizes = r.unpack(f"{n}I")
    (act,) = r.unpack("B")
    if act >= len(_ACTIVATIONS):
        raise CorruptFile(f"unknown activation code {act}")
    dropout = r.unpack(f"{n - 2}d")
    seed, step = r.unpack("qQ")
    shapes = _shapes(sizes)
    groups = [
        [r.array("<f8", int(np.prod(s))).reshape(s) for s in shapes]
        for _ in range(3)
    ]
    r.expect_end()
    params, m, v = groups
    return MlpModel(
        layer_sizes=sizes,
        weights=params[0::2],
        biases=params[1::2],
        dropout=dropout,
        activation=_ACTIVATIONS[act],
        adam=AdamState(m=m, v=v, step=step),
        seed=seed,
    )


def save_model(model: MlpModel, path: str | Path) -> None:
    """Write *model*, including optimiser state, to an MLPC file."""
    Path(path).write_bytes(model_to_bytes(model))
    log.info("saved model %s to %s", "-".join(map(str, model.layer_sizes)), path)


def load_model(path: str | Path) -> MlpModel:
    """Read a checkpoint written by :func:`save_model`.

    Raises
    ------
    CorruptFile
        Bad magic, checksum or body.
    VersionMismatch
        Intact checkpoint of an unknown version.
    """
    return _read_model(read_framed(path, MLPC_MAGIC, (MLPC_VERSION,)))
