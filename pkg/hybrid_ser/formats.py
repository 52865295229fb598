"""Little-endian binary framing shared by the FMAP, EMB2 and MLPC files.

Every file is ``magic (4 bytes) | version u16 | body | CRC32`` where the
CRC covers all preceding bytes. Readers check the magic, then the
checksum, then the version, so a damaged file is reported as corrupt
rather than as coming from another version.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from hybrid_ser.errors import CorruptFile, VersionMismatch

_CRC = struct.Struct("<I")
_VERSION = struct.Struct("<H")


class BinaryWriter:
    """Accumulates a framed file body in memory."""

    def __init__(self, magic: bytes, version: int) -> None:
        if len(magic) != 4:
            raise ValueError(f"magic must be 4 bytes, got {magic!r}")
        self._parts: list[bytes] = [magic, _VERSION.pack(version)]

    def pack(self, fmt: str, *values: object) -> None:
        self._parts.append(struct.pack("<" + fmt, *values))

    def raw(self, data: bytes) -> None:
        self._parts.append(data)

    def text(self, value: str) -> None:
        """UTF-8 string with a u16 length prefix."""
        encoded = value.encode("utf-8")
        if len(encoded) > 0xFFFF:
            raise ValueError(f"string of {len(encoded)} bytes does not fit a u16 length")
        self.pack("H", len(encoded))
        self.raw(encoded)

    def array(self, values: np.ndarray, dtype: str) -> None:
        """Row-major dump of *values* as little-endian *dtype* (e.g. ``'<f4'``)."""
        self.raw(np.ascontiguousarray(values, dtype=dtype).tobytes())

    def to_bytes(self) -> bytes:
        body = b"".join(self._parts)
        return body + _CRC.pack(zlib.crc32(body) & 0xFFFFFFFF)

    def write(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())


class BinaryReader:
    """Validating cursor over a framed file.

    Raises
    ------
    CorruptFile
        Wrong magic, checksum mismatch, or a read past the end of the body.
    VersionMismatch
        Intact file with a version not in *versions*.
    """

    def __init__(self, data: bytes, magic: bytes, versions: tuple[int, ...]) -> None:
        name = magic.decode("ascii", errors="replace")
        if len(data) < len(magic) + _VERSION.size + _CRC.size or data[: len(magic)] != magic:
            raise CorruptFile(f"not a {name} file (bad magic or too short)")
        body, (stored,) = data[: -_CRC.size], _CRC.unpack(data[-_CRC.size :])
        actual = zlib.crc32(body) & 0xFFFFFFFF
        if actual != stored:
            raise CorruptFile(f"{name} checksum mismatch: stored {stored:#010x}, computed {actual:#010x}")
        (self.version,) = _VERSION.unpack_from(body, len(magic))
        if self.version not in versions:
            raise VersionMismatch(f"{name} version {self.version} is not supported (expected {versions})")
        self._name = name
        self._body = body
        self._pos = len(magic) + _VERSION.size

    def read(self, n: int) -> bytes:
        end = self._pos + n
        if n < 0 or end > len(self._body):
            raise CorruptFile(f"{self._name} body truncated at byte {self._pos}")
        chunk = self._body[self._pos : end]
        self._pos = end
        return chunk

    def unpack(self, fmt: str) -> tuple:
        s = struct.Struct("<" + fmt)
        return s.unpack(self.read(s.size))

    def text(self) -> str:
        (n,) = self.unpack("H")
        try:
            return self.read(n).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptFile(f"{self._name} holds an invalid UTF-8 string: {exc}") from exc

    def array(self, dtype: str, count: int) -> np.ndarray:
        dt = np.dtype(dtype)
        return np.frombuffer(self.read(dt.itemsize * count), dtype=dt).copy()

    def expect_end(self) -> None:
        if self._pos != len(self._body):
            raise CorruptFile(f"{self._name} has {len(self._body) - self._pos} trailing bytes")


def read_framed(path: str | Path, magic: bytes, versions: tuple[int, ...]) -> BinaryReader:
    return BinaryReader(Path(path).read_bytes(), magic, versions)


def sniff_magic(path: str | Path) -> bytes:
    """First four bytes of *path*, for dispatching on file type."""
    with open(path, "rb") as fh:
        return fh.read(4)
