"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import io
import logging
from pathlib import Path

import pytest

from abexact import logs
from abexact.errors import AbexactError
from abexact.logs import AnsiTermFormatter, use_color_formatting, with_logging
from abexact.utils import Settings, digest, resolve_path_with_links


def test_settings_from_env(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("ABEXACT_LOG_LEVEL", "debug")
    monkeypatch.setenv("ABEXACT_LOG_FILE", "0")
    monkeypatch.setenv("ABEXACT_SEED", "5")
    monkeypatch.setenv("ABEXACT_BUDGET", "")
    monkeypatch.setenv("ABEXACT_MAX_DIM", "3")
    settings = Settings.from_env()
    assert settings.level == logging.DEBUG
    assert not settings.log_file
    assert settings.seed == 5
    assert settings.budget is None
    assert settings.max_dim == 3


def test_settings_reject_bad_values(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("ABEXACT_SEED", "seven")
    with pytest.raises(AbexactError, match="ABEXACT_SEED"):
        Settings.from_env()
    monkeypatch.delenv("ABEXACT_SEED")
    monkeypatch.setenv("ABEXACT_LOG_LEVEL", "loud")
    with pytest.raises(AbexactError, match="ABEXACT_LOG_LEVEL"):
        Settings.from_env()


def test_digest_is_stable():
    assert digest(b"abexact") == digest(b"abexact")
    assert digest(b"abexact") != digest(b"abexacT")
    assert len(digest(b"")) == 16


def test_resolve_creates_missing_parents(tmp_path: Path):
    target = tmp_path / "a" / "b" / "c.log"
    resolved = resolve_path_with_links(target)
    assert resolved.is_file()
    assert resolved.parent.is_dir()


def test_no_color_disables_ansi(monkeypatch: pytest.MonkeyPatch):
    class Tty(io.StringIO):
        def isatty(self) -> bool:
            return True

    monkeypatch.setenv("NO_COLOR", "1")
    assert not use_color_formatting(Tty())
    assert not use_color_formatting(io.StringIO())


def test_ansi_formatter_colors_by_level():
    record = logging.LogRecord("abexact.test", logging.WARNING, __file__, 1, "careful", None, None)
    assert "\x1b[33;1m" in AnsiTermFormatter().format(record)


def test_with_logging_restores_the_root_logger():
    root = logging.getLogger()
    before_level = root.level
    before_handlers = list(root.handlers)
    with with_logging(logging.DEBUG, log_file=False):
        assert root.level == logging.DEBUG
        logging.getLogger("abexact.test").debug("inside")
    assert root.level == before_level
    assert root.handlers == before_handlers


def test_logs_exports_are_a_list_of_real_names():
    assert isinstance(logs.__all__, list)
    assert all(callable(getattr(logs, name)) for name in logs.__all__)
