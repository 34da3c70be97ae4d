"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import pytest

from abexact.errors import CategoryError, MalformedRelation, NonFinite
from abexact.fincat import (
    A2,
    BC2,
    COSPAN,
    POINT,
    SPAN,
    Arrow,
    CatPresentation,
    FinCat,
    Path,
    compile_presentation,
    diagram_cat,
    discrete,
    one_point_extension,
    product,
    shape,
    split,
)


def test_library_shapes():
    assert len(SPAN.morphisms) == 5
    assert SPAN.generators == ("p", "q")
    assert SPAN.initial() == "c"
    assert SPAN.terminal() is None
    assert [m.name for m in A2.morphisms] == ["id_1", "id_2", "a"]
    assert A2.terminal() == "2"
    assert A2.initial() == "1"
    assert POINT.is_point
    assert discrete(3).is_discrete
    assert not SPAN.is_discrete


def test_bc2_relation_closes():
    assert len(BC2.morphisms) == 2
    assert BC2.comp("g", "g") == "id_x"
    assert BC2.generators == ("g",)
    assert BC2.word("id_x") == ()


def test_commutative_square():
    pres = CatPresentation(
        "Square",
        ("a", "b", "c", "d"),
        (Arrow("f", "a", "b"), Arrow("g", "b", "d"), Arrow("h", "a", "c"), Arrow("k", "c", "d")),
        ((Path("a", ("f", "g")), Path("a", ("h", "k"))),),
    )
    sq = compile_presentation(pres)
    assert len(sq.morphisms) == 9
    assert sq.comp("g", "f") == sq.comp("k", "h") == "g.f"
    assert len(sq.hom("a", "d")) == 1
    assert sq.terminal() == "d"


def test_cyclic_relation():
    pres = CatPresentation(
        "C3",
        ("x",),
        (Arrow("t", "x", "x"),),
        ((Path("x", ("t", "t", "t")), Path("x")),),
    )
    c3 = compile_presentation(pres)
    assert len(c3.morphisms) == 3
    assert c3.comp("t", "t.t") == "id_x"


def test_free_loop_is_not_finite():
    pres = CatPresentation("Loop", ("x",), (Arrow("t", "x", "x"),), closure_bound=8)
    with pytest.raises(NonFinite):
        compile_presentation(pres)


def test_malformed_relations():
    arrows = (Arrow("f", "a", "b"), Arrow("g", "a", "b"), Arrow("h", "b", "a"))
    unknown = CatPresentation("Bad", ("a", "b"), arrows, ((Path("a", ("z",)), Path("a")),))
    with pytest.raises(MalformedRelation):
        compile_presentation(unknown)
    not_parallel = CatPresentation("Bad", ("a", "b"), arrows, ((Path("a", ("f",)), Path("a")),))
    with pytest.raises(MalformedRelation):
        compile_presentation(not_parallel)


def test_reserved_identity_names():
    pres = CatPresentation("Bad", ("a",), (Arrow("id_y", "a", "a"),))
    with pytest.raises(CategoryError):
        compile_presentation(pres)


def test_validate_rejects_incomplete_tables():
    with pytest.raises(CategoryError):
        FinCat("Bad", ["x"], [Arrow("id_x", "x", "x")], {"x": "id_x"}, {})


def test_opposite():
    assert SPAN.opposite() == COSPAN
    assert SPAN.opposite().opposite() is SPAN
    assert COSPAN.terminal() == "c"
    assert POINT.opposite() == POINT
    assert A2.opposite().hom("2", "1") == ("a",)


def test_product_and_split():
    p = product(SPAN, A2)
    assert len(p.objects) == 6
    assert len(p.morphisms) == 15
    assert p.factors == (SPAN, A2)
    sp = split(SPAN, A2)
    assert sp.flat == p
    assert not sp.over_point
    assert sp.obj("c", "1") == "c|1"
    assert split(SPAN).over_point
    assert split(SPAN, POINT).flat is SPAN
    assert len(product(A2, A2).morphisms) == 9


def test_one_point_extension():
    star = one_point_extension(A2)
    assert star.objects[0] == "*"
    assert star.initial() == "*"
    assert len(star.morphisms) == 6
    assert star.comp("a", "alpha_1") == "alpha_2"
    assert star.extends is A2


def test_shape_lookup():
    assert shape("span") is SPAN
    assert shape("BC2") is BC2
    assert shape("Discrete3") == discrete(3)
    with pytest.raises(CategoryError):
        shape("Nope")


def test_morphisms_out_of_an_object():
    assert SPAN.out_of("c") == ("id_c", "p", "q")
    assert SPAN.out_of("a") == ("id_a",)
    assert diagram_cat(SPAN, POINT) is SPAN
    assert diagram_cat(SPAN, A2) == product(SPAN, A2)
