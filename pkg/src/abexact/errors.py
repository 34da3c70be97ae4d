"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

from typing import Any

__all__ = [
    "AbexactError",
    "CategoryError",
    "DSLSemanticError",
    "DSLSyntaxError",
    "FieldError",
    "GenerationBudgetExhausted",
    "KernelNotConstant",
    "MalformedRelation",
    "NonFinite",
    "NotACocone",
    "NotACone",
    "NotDiscrete",
    "RepError",
    "ShapeError",
    "UniversalPropertyError",
    "UnknownName",
    "UsageError",
]


class AbexactError(Exception):
    def __init__(self, msg: str | None = None, *args: Any):
        self.msg = msg
        super().__init__(msg, *args)


class FieldError(AbexactError):
    pass


class ShapeError(AbexactError):
    pass


class CategoryError(AbexactError):
    pass


class NonFinite(CategoryError):
    pass


class MalformedRelation(CategoryError):
    pass


class RepError(AbexactError):
    def __init__(self, msg: str | None = None, violations: list[str] | None = None):
        self.violations: list[str] = violations or []
        super().__init__(msg)


class NotACocone(AbexactError):
    pass


class NotACone(AbexactError):
    pass


class KernelNotConstant(AbexactError):
    pass


class NotDiscrete(AbexactError):
    pass


class GenerationBudgetExhausted(AbexactError):
    pass


class UniversalPropertyError(AbexactError):
    """A solve that must succeed for a genuine (co)limit did not."""


class DSLSyntaxError(AbexactError):
    def __init__(self, msg: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{msg} (line {line}, column {column})")


class DSLSemanticError(AbexactError):
    pass


class UnknownName(AbexactError):
    pass


class UsageError(AbexactError):
    """Malformed command line or unreadable input file."""
