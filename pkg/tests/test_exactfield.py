"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

from fractions import Fraction

import pytest
from conftest import F2, F3, mat

from abexact.errors import FieldError, ShapeError
from abexact.exactfield import QQ, Field, Mat, MatrixEquations, cokernel, kernel, left_solve, solve


def test_parse_fields():
    assert Field.parse("Q") == QQ
    assert Field.parse("QQ") == QQ
    assert Field.parse("F3") == F3
    with pytest.raises(FieldError):
        Field.parse("F4")
    with pytest.raises(FieldError):
        Field.parse("R")


def test_coerce_into_prime_fields():
    assert F3.coerce("1/2") == 2
    assert F2.coerce(-1) == 1
    assert QQ.coerce("-3/6") == Fraction(-1, 2)
    with pytest.raises(FieldError):
        F3.coerce("1/3")


def test_fmt_is_exact():
    assert QQ.fmt(Fraction(1, 2)) == "1/2"
    assert QQ.fmt(Fraction(-3)) == "-3"
    assert F3.fmt(2) == "2"


def test_rank_depends_on_the_field():
    rows = [[1, 1], [1, -1]]
    assert mat(QQ, rows).rank() == 2
    assert mat(F2, rows).rank() == 1
    assert mat(F3, rows).rank() == 2


@pytest.mark.parametrize(
    "rows",
    [
        [[1, 2, 3], [2, 4, 6]],
        [[0, 1], [1, 0], [1, 1]],
        [[1, 0, 0]],
        [[0, 0], [0, 0]],
    ],
)
def test_kernel_and_cokernel(field: Field, rows: list[list[int]]):
    m = mat(field, rows)
    k = kernel(m)
    assert (m @ k).is_zero()
    assert k.cols == m.cols - m.rank()
    assert k.is_injective()
    q = cokernel(m)
    assert (q @ m).is_zero()
    assert q.rows == m.rows - m.rank()
    assert q.is_surjective()


def test_solve_and_left_solve():
    m = mat(QQ, [[1, 2], [3, 4]])
    b = mat(QQ, [[5], [6]])
    x = solve(m, b)
    assert x is not None
    assert m @ x == b
    row = mat(QQ, [[1, 0]])
    y = left_solve(m, row)
    assert y is not None
    assert y @ m == row
    assert solve(mat(QQ, [[1], [1]]), mat(QQ, [[1], [0]])) is None


def test_inverse():
    m = mat(F3, [[1, 1], [0, 2]])
    assert m @ m.inverse() == Mat.identity(F3, 2)
    with pytest.raises(ShapeError):
        mat(QQ, [[1, 2], [2, 4]]).inverse()


def test_shape_and_field_errors():
    with pytest.raises(ShapeError):
        _ = mat(QQ, [[1, 2]]) @ mat(QQ, [[1, 2]])
    with pytest.raises(FieldError):
        _ = Mat.identity(QQ, 1) @ Mat.identity(F2, 1)
    with pytest.raises(ShapeError):
        Mat(QQ, 2, 2, ((Fraction(1),),))


def test_blocks():
    one = Mat.identity(QQ, 1)
    b = mat(QQ, [[1, 2], [3, 4]])
    d = Mat.block_diag(QQ, [one, b])
    assert d.shape == (3, 3)
    assert d.tolist()[0] == [1, 0, 0]
    assert d.columns(1, 3).row_slice(1, 3) == b
    assert Mat.hstack(QQ, [b, b], 2).shape == (2, 4)
    assert Mat.vstack(QQ, [b, b], 2).shape == (4, 2)
    assert b.T == mat(QQ, [[1, 3], [2, 4]])
    assert (b - b).is_zero()
    assert -b + b == Mat.zeros(QQ, 2, 2)


def test_column_basis_spans_the_image():
    m = mat(QQ, [[1, 2, 0], [2, 4, 1]])
    basis = m.column_basis()
    assert basis.cols == m.rank() == 2
    assert solve(basis, m) is not None


def test_matrix_equations_solve_for_whole_matrices():
    a = mat(QQ, [[1, 1], [0, 1]])
    ident = Mat.identity(QQ, 2)
    eqs = MatrixEquations[str](QQ, [("x", (2, 2))])
    eqs.add([("x", a, ident)], ident)
    assert eqs.nvars == 4
    assert eqs.rank() == 4
    sol = eqs.solve()
    assert sol is not None
    assert a @ sol["x"] == ident


def test_inconsistent_systems_carry_a_refutation(field: Field):
    one = Mat.identity(field, 1)
    eqs = MatrixEquations[str](field, [("x", (1, 1))])
    eqs.add([("x", one, one)], one)
    assert eqs.inconsistency() is None
    eqs.add([("x", one, one)], Mat.zeros(field, 1, 1))
    assert eqs.solve() is None
    refutation = eqs.inconsistency()
    assert refutation is not None
    assert refutation.holds()
    assert refutation.y.shape == (1, 2)


def test_singular_system_refutation():
    a = mat(QQ, [[1, 0], [0, 0]])
    ident = Mat.identity(QQ, 2)
    eqs = MatrixEquations[str](QQ, [("x", (2, 2))])
    eqs.add([("x", a, ident)], ident)
    refutation = eqs.inconsistency()
    assert refutation is not None
    assert (refutation.y @ refutation.lhs).is_zero()
    assert not (refutation.y @ refutation.rhs).is_zero()


def test_matrix_equations_null_space_is_the_centralizer():
    n = mat(QQ, [[0, 1], [0, 0]])
    ident = Mat.identity(QQ, 2)
    eqs = MatrixEquations[str](QQ, [("x", (2, 2))])
    eqs.add([("x", ident, n), ("x", -n, ident)], Mat.zeros(QQ, 2, 2))
    basis = eqs.null_space()
    assert len(basis) == 2
    for sol in basis:
        assert sol["x"] @ n == n @ sol["x"]
