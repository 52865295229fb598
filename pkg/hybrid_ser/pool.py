"""ExtractionPool -- concurrent per-file feature extraction.

Each file runs decode -> resample -> subsample -> feature maps on a worker
thread. A semaphore bounds how many files are in flight, and results come
back in *input* order whatever order the workers finish in.
"""

from __future__ import annotations

import asyncio
import logging
from dataclasses import dataclass, field
from typing import Sequence

from hybrid_ser.audio_io import read_wav
from hybrid_ser.featuremap import FeatureMap, FeatureMapSpec, extract_maps
from hybrid_ser.hpss import HpssConfig
from hybrid_ser.manifest import ManifestRow

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# FileResult dataclass
# ---------------------------------------------------------------------------

@dataclass
class FileResult:
    """Outcome of extracting one manifest row."""

    success: bool
    maps: list[FeatureMap] = field(default_factory=list)
    error: str | None = None
    index: int = -1
    source: str = ""


def extract_file(row: ManifestRow, spec: FeatureMapSpec, hpss_cfg: HpssConfig | None = None) -> list[FeatureMap]:
    """Feature maps for one labelled file; ids are ``<stem>#<i>``."""
    buf = read_wav(row.path)
    return extract_maps(buf, spec, hpss_cfg, label=row.label, source_id=row.path.stem)


# ---------------------------------------------------------------------------
# ExtractionPool
# ---------------------------------------------------------------------------

class ExtractionPool:
    """Runs :func:`extract_file` over many rows with bounded concurrency.

    Parameters
    ----------
    spec:
        Feature-map geometry applied to every file.
    hpss_cfg:
        Decomposition settings for ``hybrid`` maps.
    concurrency:
        Maximum number of files processed at once (semaphore size).
    """

    def __init__(
        self,
        spec: FeatureMapSpec,
        hpss_cfg: HpssConfig | None = None,
        concurrency: int = 1,
    ) -> None:
        if concurrency < 1:
            raise ValueError(f"concurrency must be >= 1, got {concurrency}")
        self._spec = spec
        self._hpss_cfg = hpss_cfg or HpssConfig()
        self._concurrency = concurrency
        self._semaphore = asyncio.Semaphore(concurrency)

    @property
    def concurrency(self) -> int:
        return self._concurrency

    @property
    def spec(self) -> FeatureMapSpec:
        return self._spec

    async def extract_one(self, index: int, row: ManifestRow) -> FileResult:
        """Extract *row*; any exception becomes a failed :class:`FileResult`."""
        async with self._semaphore:
            try:
                maps = await asyncio.to_thread(extract_file, row, self._spec, self._hpss_cfg)
            except Exception as exc:
                log.warning("%s: %s: %s", row.path, type(exc).__name__, exc)
                return FileResult(
                    success=False,
                    error=f"{type(exc).__name__}: {exc}",
                    index=index,
                    source=str(row.path),
                )
            log.debug("%s: %d maps", row.path, len(maps))
            return FileResult(success=True, maps=maps, index=index, source=str(row.path))

    async def extract_all(self, rows: Sequence[ManifestRow]) -> list[FileResult]:
        """Extract every row concurrently.

        Returns results in *input* order (``results[i]`` corresponds to
        ``rows[i]``).
        """
        tasks = [self.extract_one(i, row) for i, row in enumerate(rows)]
        return list(await asyncio.gather(*tasks))


def run_extraction(
    rows: Sequence[ManifestRow],
    spec: FeatureMapSpec,
    hpss_cfg: HpssConfig | None = None,
    concurrency: int = 1,
) -> list[FileResult]:
    """Synchronous entry point around :meth:`ExtractionPool.extract_all`."""

    async def _go() -> list[FileResult]:
        return await ExtractionPool(spec, hpss_cfg, concurrency).extract_all(rows)

    return asyncio.run(_go())
