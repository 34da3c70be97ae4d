"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Self

import msgspec

from .errors import FieldError, ShapeError

__all__ = [
    "QQ",
    "Field",
    "Inconsistency",
    "Mat",
    "MatrixEquations",
    "Scalar",
    "cokernel",
    "kernel",
    "left_solve",
    "rank",
    "solve",
]


type Scalar = Fraction | int


@lru_cache(64)
def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


class Field(msgspec.Struct, frozen=True, gc=False):
    """Either the rationals (``char == 0``) or the prime field with ``char`` elements."""

    char: int = 0

    def __post_init__(self) -> None:
        if self.char and not _is_prime(self.char):
            msg = f"F_{self.char} is not a field, {self.char} is not prime"
            raise FieldError(msg)

    @classmethod
    def parse(cls, text: str) -> Self:
        text = text.strip()
        if text in {"Q", "QQ"}:
            return cls()
        if text[:1] in {"F", "f"} and text[1:].isdigit():
            return cls(int(text[1:]))
        msg = f"Unknown field {text!r}, expected Q or F<p>"
        raise FieldError(msg)

    @property
    def name(self) -> str:
        return f"F{self.char}" if self.char else "Q"

    @property
    def is_finite(self) -> bool:
        return self.char != 0

    @property
    def zero(self) -> Scalar:
        return 0 if self.char else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.char else Fraction(1)

    def reduce(self, x: Scalar) -> Scalar:
        if self.char:
            return x % self.char  # pyright: ignore[reportReturnType]
        return x

    def coerce(self, x: Scalar | str) -> Scalar:
        if isinstance(x, str):
            x = Fraction(x.strip())
        if not self.char:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.char == 0:
                msg = f"{x} has no image in {self.name}"
                raise FieldError(msg)
            return (x.numerator * pow(x.denominator, -1, self.char)) % self.char
        return x % self.char

    def inv(self, x: Scalar) -> Scalar:
        if not x:
            msg = "Division by zero"
            raise ZeroDivisionError(msg)
        if self.char:
            return pow(int(x), -1, self.char)
        return 1 / Fraction(x)

    def fmt(self, x: Scalar) -> str:
        if self.char:
            return str(int(x))
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def elements(self) -> range:
        if not self.char:
            msg = "Q has no finite element list"
            raise FieldError(msg)
        return range(self.char)

    def sample(self, rng: random.Random, spread: int = 2) -> Scalar:
        if self.char:
            return rng.randrange(self.char)
        return Fraction(rng.randint(-spread, spread))


QQ = Field()


def _rref(
    field: Field, rows: list[list[Scalar]], limit: int
) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form, pivots taken from the first ``limit`` columns only.

    Pivoting is first-nonzero, so the result depends only on the input order.
    """
    red = field.reduce
    pivots: list[int] = []
    nrows = len(rows)
    r = 0
    for c in range(limit):
        if r == nrows:
            break
        piv = next((k for k in range(r, nrows) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        if inv != 1:
            rows[r] = [red(v * inv) for v in rows[r]]
        pr = rows[r]
        for k in range(nrows):
            if k != r and (f := rows[k][c]):
                rows[k] = [red(a - f * b) for a, b in zip(rows[k], pr, strict=True)]
        pivots.append(c)
        r += 1
    return rows, pivots


class Mat(msgspec.Struct, frozen=True, gc=False):
    """An exact ``rows`` x ``cols`` matrix acting on column vectors."""

    field: Field
    rows: int
    cols: int
    data: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            msg = f"Matrix data does not match its declared shape {self.rows}x{self.cols}"
            raise ShapeError(msg)

    def __repr__(self) -> str:
        return f"<Mat {self.rows}x{self.cols} over {self.field.name}: {self.tolist()}>"

    # construction

    @classmethod
    def from_rows(
        cls, field: Field, rows: Iterable[Iterable[Scalar | str]], cols: int | None = None
    ) -> Self:
        data = tuple(tuple(field.coerce(v) for v in row) for row in rows)
        if cols is None:
            if not data:
                msg = "Column count is required for a matrix without rows"
                raise ShapeError(msg)
            cols = len(data[0])
        return cls(field, len(data), cols, data)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence[Scalar]], rows: int) -> Self:
        if any(len(c) != rows for c in columns):
            msg = f"Every column must have {rows} entries"
            raise ShapeError(msg)
        data = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls(field, rows, len(columns), data)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> Self:
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> Self:
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def hstack(cls, field: Field, mats: Sequence[Mat], rows: int) -> Self:
        for m in mats:
            m.check_field(field)
            if m.rows != rows:
                msg = f"Cannot place a {m.rows}-row block beside {rows} rows"
                raise ShapeError(msg)
        data = tuple(tuple(v for m in mats for v in m.data[i]) for i in range(rows))
        return cls(field, rows, sum(m.cols for m in mats), data)

    @classmethod
    def vstack(cls, field: Field, mats: Sequence[Mat], cols: int) -> Self:
        for m in mats:
            m.check_field(field)
            if m.cols != cols:
                msg = f"Cannot stack a {m.cols}-column block onto {cols} columns"
                raise ShapeError(msg)
        data = tuple(row for m in mats for row in m.data)
        return cls(field, len(data), cols, data)

    @classmethod
    def block_diag(cls, field: Field, mats: Sequence[Mat]) -> Self:
        total_cols = sum(m.cols for m in mats)
        z = field.zero
        data: list[tuple[Scalar, ...]] = []
        offset = 0
        for m in mats:
            m.check_field(field)
            left = (z,) * offset
            right = (z,) * (total_cols - offset - m.cols)
            data.extend(left + row + right for row in m.data)
            offset += m.cols
        return cls(field, len(data), total_cols, tuple(data))

    # inspection

    def check_field(self, field: Field) -> None:
        if self.field != field:
            msg = f"Mixed fields: {self.field.name} and {field.name}"
            raise FieldError(msg)

    def tolist(self) -> list[list[Scalar]]:
        return [list(r) for r in self.data]

    def flatten(self) -> tuple[Scalar, ...]:
        return tuple(v for r in self.data for v in r)

    def column(self, j: int) -> tuple[Scalar, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self, start: int, stop: int) -> Mat:
        return Mat(self.field, self.rows, stop - start, tuple(r[start:stop] for r in self.data))

    def row_slice(self, start: int, stop: int) -> Mat:
        return Mat(self.field, stop - start, self.cols, self.data[start:stop])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> Mat:  # noqa: N802
        data = tuple(tuple(r[j] for r in self.data) for j in range(self.cols))
        return Mat(self.field, self.cols, self.rows, data)

    def is_zero(self) -> bool:
        return not any(v for r in self.data for v in r)

    def rank(self) -> int:
        return rank(self)

    def is_injective(self) -> bool:
        return rank(self) == self.cols

    def is_surjective(self) -> bool:
        return rank(self) == self.rows

    def is_invertible(self) -> bool:
        return self.rows == self.cols and rank(self) == self.rows

    def inverse(self) -> Mat:
        if not self.is_invertible():
            msg = f"{self!r} is not invertible"
            raise ShapeError(msg)
        inv = solve(self, Mat.identity(self.field, self.rows))
        assert inv is not None, "invertible matrices always solve"
        return inv

    def column_basis(self) -> Mat:
        """The pivot columns of ``self``: a basis of its column space."""
        _rows, pivots = _rref(self.field, [list(r) for r in self.data], self.cols)
        return Mat.from_columns(self.field, [self.column(c) for c in pivots], self.rows)

    # arithmetic

    def __matmul__(self, other: Mat) -> Mat:
        self.check_field(other.field)
        if self.cols != other.rows:
            msg = f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            raise ShapeError(msg)
        red = self.field.reduce
        zero = self.field.zero
        other_cols = [other.column(j) for j in range(other.cols)]
        data = tuple(
            tuple(red(sum((a * b for a, b in zip(r, c, strict=True)), zero)) for c in other_cols)
            for r in self.data
        )
        return Mat(self.field, self.rows, other.cols, data)

    def _same_shape(self, other: Mat) -> None:
        self.check_field(other.field)
        if self.shape != other.shape:
            msg = f"Shape mismatch {self.shape} vs {other.shape}"
            raise ShapeError(msg)

    def __add__(self, other: Mat) -> Mat:
        self._same_shape(other)
        red = self.field.reduce
        data = tuple(
            tuple(red(a + b) for a, b in zip(r, s, strict=True))
            for r, s in zip(self.data, other.data, strict=True)
        )
        return Mat(self.field, self.rows, self.cols, data)

    def __sub__(self, other: Mat) -> Mat:
        self._same_shape(other)
        red = self.field.reduce
        data = tuple(
            tuple(red(a - b) for a, b in zip(r, s, strict=True))
            for r, s in zip(self.data, other.data, strict=True)
        )
        return Mat(self.field, self.rows, self.cols, data)

    def __neg__(self) -> Mat:
        return self.scale(self.field.coerce(-1))

    def scale(self, s: Scalar) -> Mat:
        red = self.field.reduce
        data = tuple(tuple(red(s * v) for v in r) for r in self.data)
        return Mat(self.field, self.rows, self.cols, data)


def rank(m: Mat) -> int:
    _rows, pivots = _rref(m.field, [list(r) for r in m.data], m.cols)
    return len(pivots)


def kernel(m: Mat) -> Mat:
    """Columns form a basis of the null space of ``m``."""
    field = m.field
    rows, pivots = _rref(field, [list(r) for r in m.data], m.cols)
    pivot_set = set(pivots)
    basis: list[list[Scalar]] = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [field.zero] * m.cols
        v[f] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = field.reduce(-rows[i][f])
        basis.append(v)
    return Mat.from_columns(field, basis, m.cols)


def cokernel(m: Mat) -> Mat:
    """A full row rank ``q`` with ``q @ m == 0`` whose kernel is the column space of ``m``."""
    return kernel(m.T).T


def solve(m: Mat, b: Mat) -> Mat | None:
    """Some ``x`` with ``m @ x == b``, or ``None`` when ``b`` leaves the column space of ``m``."""
    m.check_field(b.field)
    if m.rows != b.rows:
        msg = f"Cannot solve a {m.rows}-row system against a {b.rows}-row right-hand side"
        raise ShapeError(msg)
    field = m.field
    aug = [list(r) + list(s) for r, s in zip(m.data, b.data, strict=True)]
    rows, pivots = _rref(field, aug, m.cols)
    for r in rows[len(pivots) :]:
        if any(r[m.cols :]):
            return None
    x = [[field.zero] * b.cols for _ in range(m.cols)]
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][m.cols :]
    return Mat(field, m.cols, b.cols, tuple(tuple(r) for r in x))


def left_solve(m: Mat, b: Mat) -> Mat | None:
    """Some ``x`` with ``x @ m == b``."""
    x = solve(m.T, b.T)
    return None if x is None else x.T


class Inconsistency(NamedTuple):
    """A row ``y`` with ``y @ lhs == 0`` and ``y @ rhs != 0``, so ``lhs @ x == rhs`` has no solution."""

    lhs: Mat
    rhs: Mat
    y: Mat

    def holds(self) -> bool:
        return (self.y @ self.lhs).is_zero() and not (self.y @ self.rhs).is_zero()


class MatrixEquations[K]:
    """Linear equations whose unknowns are whole matrices.

    Every equation reads ``sum(L @ X[key] @ R for key, L, R in terms) == rhs``.
    Unknown matrices are flattened row-major, in the order their keys were given.
    """

    __slots__ = ("_offsets", "_rhs", "_rows", "field", "nvars", "shapes")

    def __init__(self, field: Field, shapes: Iterable[tuple[K, tuple[int, int]]]) -> None:
        self.field = field
        self.shapes: dict[K, tuple[int, int]] = dict(shapes)
        self._offsets: dict[K, int] = {}
        n = 0
        for key, (r, c) in self.shapes.items():
            self._offsets[key] = n
            n += r * c
        self.nvars = n
        self._rows: list[list[Scalar]] = []
        self._rhs: list[Scalar] = []

    def add(self, terms: Sequence[tuple[K, Mat, Mat]], rhs: Mat) -> None:
        field = self.field
        red = field.reduce
        block: list[list[Scalar]] = [
            [field.zero] * self.nvars for _ in range(rhs.rows * rhs.cols)
        ]
        for key, left, right in terms:
            r_x, c_x = self.shapes[key]
            if left.cols != r_x or right.rows != c_x:
                msg = f"Term for {key!r} does not fit an unknown of shape {r_x}x{c_x}"
                raise ShapeError(msg)
            if left.rows != rhs.rows or right.cols != rhs.cols:
                msg = "Term shape does not match the right-hand side"
                raise ShapeError(msg)
            off = self._offsets[key]
            for r in range(rhs.rows):
                lrow = left.data[r]
                for c in range(rhs.cols):
                    row = block[r * rhs.cols + c]
                    for a in range(r_x):
                        la = lrow[a]
                        if not la:
                            continue
                        base = off + a * c_x
                        for b in range(c_x):
                            rb = right.data[b][c]
                            if rb:
                                row[base + b] = red(row[base + b] + la * rb)
        self._rows.extend(block)
        self._rhs.extend(rhs.flatten())

    def _system(self) -> tuple[Mat, Mat]:
        field = self.field
        lhs = Mat(field, len(self._rows), self.nvars, tuple(tuple(r) for r in self._rows))
        rhs = Mat(field, len(self._rhs), 1, tuple((v,) for v in self._rhs))
        return lhs, rhs

    def _unflatten(self, vec: Sequence[Scalar]) -> dict[K, Mat]:
        out: dict[K, Mat] = {}
        for key, (r, c) in self.shapes.items():
            off = self._offsets[key]
            data = tuple(tuple(vec[off + i * c + j] for j in range(c)) for i in range(r))
            out[key] = Mat(self.field, r, c, data)
        return out

    def solve(self) -> dict[K, Mat] | None:
        lhs, rhs = self._system()
        x = solve(lhs, rhs)
        return None if x is None else self._unflatten(x.column(0))

    def inconsistency(self) -> Inconsistency | None:
        lhs, rhs = self._system()
        q = cokernel(lhs)
        for row, v in zip(q.data, (q @ rhs).column(0), strict=True):
            if v:
                return Inconsistency(lhs, rhs, Mat(self.field, 1, lhs.rows, (row,)))
        return None

    def null_space(self) -> list[dict[K, Mat]]:
        lhs, _rhs = self._system()
        basis = kernel(lhs)
        return [self._unflatten(basis.column(j)) for j in range(basis.cols)]

    def rank(self) -> int:
        lhs, _rhs = self._system()
        return rank(lhs)
