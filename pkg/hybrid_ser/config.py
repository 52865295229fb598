"""Command-line settings: flag > JSON config file > environment > default.

Recognised environment variables: ``HYBRID_SER_SEED``,
``HYBRID_SER_WORKERS`` and ``HYBRID_SER_LOG_LEVEL``.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Callable, Mapping, TypeVar

T = TypeVar("T")

ENV_PREFIX = "HYBRID_SER_"
ENV_KEYS = frozenset({"seed", "workers", "log_level"})


def load_config(path: str | Path | None) -> dict[str, Any]:
    """Read a JSON object of settings; ``None`` gives an empty dict.

    Keys use the long flag names with ``_`` for ``-`` (``batch_size``).
    """
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object, got {type(data).__name__}")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def env_name(name: str) -> str:
    return ENV_PREFIX + name.upper()


def resolve(
    name: str,
    flag: T | None,
    file_cfg: Mapping[str, Any],
    default: T,
    cast: Callable[[Any], T] | None = None,
) -> T:
    """Pick the value of setting *name* by precedence.

    *cast* converts file and environment values (for example ``int``);
    command-line values are taken as already parsed.
    """
    if flag is not None:
        return flag
    convert = cast or (lambda v: v)
    if name in file_cfg and file_cfg[name] is not None:
        return convert(file_cfg[name])
    if name in ENV_KEYS and env_name(name) in os.environ:
        return convert(os.environ[env_name(name)])
    return default
