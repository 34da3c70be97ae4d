"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Self

import msgspec
import platformdirs
import xxhash

from .errors import AbexactError
from .fincat import DEFAULT_CLOSURE_BOUND

platformdir_stuff = platformdirs.PlatformDirs("abexact", roaming=False)


__all__ = ["Settings", "digest", "platformdir_stuff", "resolve_path_with_links"]

_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


def _env_int[T: int | None](name: str, default: T) -> int | T:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        msg = f"{name} must be an integer, got {raw!r}"
        raise AbexactError(msg) from None


class Settings(msgspec.Struct, frozen=True, gc=False):
    log_level: str = "INFO"
    log_file: bool = True
    seed: int = 0
    budget: int | None = None
    closure_bound: int = DEFAULT_CLOSURE_BOUND
    max_dim: int = 2

    @classmethod
    def from_env(cls) -> Self:
        level = (os.getenv("ABEXACT_LOG_LEVEL") or "INFO").strip().upper()
        if level not in _LEVELS:
            msg = f"ABEXACT_LOG_LEVEL must be one of {sorted(_LEVELS)}, got {level!r}"
            raise AbexactError(msg)
        return cls(
            log_level=level,
            log_file=os.getenv("ABEXACT_LOG_FILE", "1").strip() != "0",
            seed=_env_int("ABEXACT_SEED", 0),
            budget=_env_int("ABEXACT_BUDGET", None),
            closure_bound=_env_int("ABEXACT_CLOSURE_BOUND", DEFAULT_CLOSURE_BOUND),
            max_dim=_env_int("ABEXACT_MAX_DIM", 2),
        )

    @property
    def level(self) -> int:
        return logging.getLevelNamesMapping()[self.log_level]


def digest(data: bytes, /) -> str:
    return xxhash.xxh64_hexdigest(data, seed=0)


def resolve_path_with_links(path: Path, folder: bool = False) -> Path:
    """
    Python only resolves with strict=True if the path exists.
    """
    try:
        return path.resolve(strict=True)
    except FileNotFoundError:
        path = resolve_path_with_links(path.parent, folder=True) / path.name
        if folder:
            path.mkdir(mode=0o700)
        else:
            path.touch(mode=0o600)
        return path.resolve(strict=True)
