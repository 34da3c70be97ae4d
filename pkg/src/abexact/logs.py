"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import logging
import logging.handlers
import os
import queue
import sys
from collections.abc import Generator
from contextlib import contextmanager
from typing import Any, Protocol

from .utils import platformdir_stuff, resolve_path_with_links

__all__ = ["AnsiTermFormatter", "use_color_formatting", "with_logging"]


class _Stream(Protocol):
    def write(self, s: str, /) -> object: ...


DATE_FMT = "%Y-%m-%d %H:%M:%S"
PLAIN = logging.Formatter("[%(asctime)s] [%(levelname)-8s] %(name)s: %(message)s", DATE_FMT)

_LEVEL_COLORS: dict[int, str] = {
    logging.DEBUG: "\x1b[40;1m",
    logging.INFO: "\x1b[34;1m",
    logging.WARNING: "\x1b[33;1m",
    logging.ERROR: "\x1b[31m",
    logging.CRITICAL: "\x1b[41m",
}


class AnsiTermFormatter(logging.Formatter):
    """Level-coloured records for an interactive terminal; tracebacks in red."""

    def __init__(self) -> None:
        super().__init__(datefmt=DATE_FMT)
        self._by_level = {
            level: logging.Formatter(
                "\x1b[30;1m%(asctime)s\x1b[0m " + color + "%(levelname)-8s\x1b[0m \x1b[35m%(name)s\x1b[0m %(message)s",
                DATE_FMT,
            )
            for level, color in _LEVEL_COLORS.items()
        }

    def format(self, record: logging.LogRecord) -> str:
        formatter = self._by_level.get(record.levelno, self._by_level[logging.DEBUG])
        if record.exc_info:
            record.exc_text = "\x1b[31m%s\x1b[0m" % formatter.formatException(record.exc_info)
        try:
            return formatter.format(record)
        finally:
            record.exc_text = None


def use_color_formatting(stream: _Stream) -> bool:
    if os.environ.get("NO_COLOR"):
        return False
    if os.environ.get("FORCE_COLOR"):
        return True
    isatty = getattr(stream, "isatty", None)
    if isatty is None or not isatty():
        return False
    return sys.platform != "win32" or "WT_SESSION" in os.environ


@contextmanager
def with_logging(level: int = logging.INFO, *, log_file: bool = True) -> Generator[None]:
    """Route every record through a queue to stderr and, optionally, a rotating file.

    The root logger's level and handlers are restored on exit, so commands can
    be run back to back in one process.
    """
    stderr_handler = logging.StreamHandler()
    stderr_handler.setFormatter(AnsiTermFormatter() if use_color_formatting(sys.stderr) else PLAIN)
    sinks: list[logging.Handler] = [stderr_handler]

    if log_file:
        log_dir = resolve_path_with_links(platformdir_stuff.user_log_path, folder=True)
        file_handler = logging.handlers.RotatingFileHandler(
            log_dir / "abexact.log", maxBytes=2_000_000, backupCount=5, encoding="utf-8"
        )
        file_handler.setFormatter(PLAIN)
        sinks.append(file_handler)

    records: queue.SimpleQueue[Any] = queue.SimpleQueue()
    q_handler = logging.handlers.QueueHandler(records)
    listener = logging.handlers.QueueListener(records, *sinks)

    root = logging.getLogger()
    previous_level = root.level
    root.setLevel(level)
    root.addHandler(q_handler)
    listener.start()
    try:
        yield
    finally:
        listener.stop()
        root.removeHandler(q_handler)
        root.setLevel(previous_level)
        for sink in sinks:
            sink.close()
