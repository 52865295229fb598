"""PNG rendering of feature-map channels.

One image per map per channel, one pixel per cell, 8 bits per colour
component. Band 0 is drawn at the bottom.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Literal, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.image as mpimg  # noqa: E402
import numpy as np  # noqa: E402

from hybrid_ser.featuremap import FeatureMap  # noqa: E402

log = logging.getLogger(__name__)

Colormap = Literal["grayscale", "heat"]
COLORMAPS: tuple[str, ...] = ("grayscale", "heat")


def to_pixels(channel: np.ndarray, colormap: Colormap = "grayscale") -> np.ndarray:
    """``(bands, frames, 3)`` uint8 RGB for a channel of values in ``[0, 1]``.

    Row ``b`` of the result is band ``b``; grayscale intensity is
    ``round(v * 255)``, ``heat`` uses matplotlib's ``hot`` colormap.
    """
    v = np.clip(np.asarray(channel, dtype=np.float64), 0.0, 1.0)
    if colormap == "grayscale":
        grey = np.rint(v * 255.0).astype(np.uint8)
        return np.repeat(grey[..., None], 3, axis=-1)
    if colormap == "heat":
        return matplotlib.colormaps["hot"](v, bytes=True)[..., :3]
    raise ValueError(f"colormap must be one of {COLORMAPS}, got {colormap!r}")


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", text).strip("_") or "map"


def render_map(fmap: FeatureMap, out_dir: str | Path, index: int, colormap: Colormap = "grayscale") -> list[Path]:
    """Write one PNG per channel of *fmap*; returns the paths written."""
    out_dir = Path(out_dir)
    paths = []
    for c, channel in enumerate(fmap.channels):
        path = out_dir / f"{index:05d}_{_slug(fmap.source_id)}_ch{c}.png"
        mpimg.imsave(path, to_pixels(channel, colormap), origin="lower")
        paths.append(path)
    return paths


def render_maps(maps: Sequence[FeatureMap], out_dir: str | Path, colormap: Colormap = "grayscale") -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [p for i, m in enumerate(maps) for p in render_map(m, out_dir, i, colormap)]
    log.info("rendered %d images to %s", len(paths), out_dir)
    return paths
