"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

from typing import Any, Literal

import msgspec

type Outcome = Literal["holds", "fails", "inconclusive", "ok"]

SCHEMA_VERSION = 1


class Report(msgspec.Struct, frozen=True, kw_only=True):
    command: str
    claim: str | None = None
    result: Outcome
    label: str
    inputs: dict[str, str] = {}
    seed: int | None = None
    budget: int = 0
    certificate: dict[str, Any] = {}
    schema: int = SCHEMA_VERSION

    @property
    def exit_code(self) -> int:
        match self.result:
            case "holds" | "ok":
                return 0
            case "fails":
                return 1
            case "inconclusive":
                return 3
