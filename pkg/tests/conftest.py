"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import random
from collections.abc import Sequence

import pytest

from abexact.exactfield import QQ, Field, Mat, Scalar
from abexact.fincat import A2, SPAN
from abexact.rep import Rep

F2 = Field(2)
F3 = Field(3)


def mat(field: Field, rows: Sequence[Sequence[Scalar | str]], cols: int | None = None) -> Mat:
    return Mat.from_rows(field, rows, cols)


def simple(field: Field, at: str) -> Rep:
    """The simple A2 representation supported at ``at``."""
    dim = {i: int(i == at) for i in A2.objects}
    return Rep.from_generators(A2, field, dim, {})


def span_rep(field: Field) -> Rep:
    """``k <- k² -> k`` through the two coordinate projections."""
    return Rep.from_generators(
        SPAN,
        field,
        {"c": 2, "a": 1, "b": 1},
        {"p": mat(field, [[1, 0]]), "q": mat(field, [[0, 1]])},
    )


@pytest.fixture(params=[QQ, F2, F3], ids=lambda f: f.name)
def field(request: pytest.FixtureRequest) -> Field:
    return request.param


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0)
