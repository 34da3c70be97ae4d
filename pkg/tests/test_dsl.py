"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import pytest

from abexact.construct import z_eta
from abexact.dsl import DerivedCat, Workspace, dumps, parse
from abexact.errors import DSLSemanticError, DSLSyntaxError, UnknownName
from abexact.exactfield import QQ
from abexact.fincat import A2, BC2, SPAN, library_names, one_point_extension, product, shape
from abexact.verify import span_worked_eta

SPAN_SOURCE = """
# the worked span sequence
category S {
    objects: c, a, b;
    arrows: p: c -> a, q: c -> b;
}

functor K over S field Q {
    dim c = 1; dim a = 1; dim b = 1;
    map p = [[1]];
    map q = [[1]];
}

functor F over S field Q {
    dim c = 2; dim a = 1; dim b = 1;
    map p = [[1, 0]];
    map q = [[0, 1]];
}

functor G over S field Q {
    dim c = 1;
}

natmap i : K -> F {
    comp c = [[1], [1]];
    comp a = [[1]];
    comp b = [[1]];
}

natmap e : F -> G {
    comp c = [[1, -1]];
}

ses eta {
    mono: i;
    epi: e;
}
"""


def test_span_category_block():
    ws = parse(SPAN_SOURCE)
    cat = ws.category("S")
    assert len(cat.morphisms) == 5
    assert cat == SPAN
    assert ws.functor("G").dim == {"c": 1, "a": 0, "b": 0}


def test_worked_sequence_from_text():
    ws = parse(SPAN_SOURCE)
    eta = ws.ses("eta")
    worked = span_worked_eta(QQ)
    assert eta.mono == worked.mono
    assert eta.epi == worked.epi
    assert not z_eta(eta).f_is_mono


def test_dumps_parses_back():
    ws = parse(SPAN_SOURCE)
    text = dumps(ws)
    assert parse(text) == ws
    assert dumps(parse(text)) == text


def test_relations_and_bound():
    source = """
    category C2 {
        objects: x;
        arrows: g: x -> x;
        relations: g.g = id_x;
        bound: 16;
    }
    functor Sign over C2 field F3 { dim x = 1; map g = [[-1]]; }
    """
    ws = parse(source)
    assert len(ws.category("C2").morphisms) == 2
    assert ws.functor("Sign").action["g"].tolist() == [[2]]
    assert "bound: 16;" in dumps(ws)


@pytest.mark.parametrize("name", library_names())
def test_library_shapes_survive_dumps(name: str):
    cat = shape(name)
    dims = " ".join(f"dim {i} = 1;" for i in cat.objects)
    maps = " ".join(f"map {g} = [[1]];" for g in cat.generators)
    source = f"""
    category O = opposite({name});
    category T = star({name});
    functor K over {name} field F2 {{ {dims} {maps} }}
    """
    ws = parse(source)
    text = dumps(ws)
    again = parse(text)
    assert again == ws
    assert again.category("O") == cat.opposite()
    assert dumps(again) == text


def test_bc2_block_survives_dumps():
    source = """
    category B {
        objects: x;
        arrows: g: x -> x;
        relations: g.g = id_x;
    }
    functor Swap over B field Q { dim x = 2; map g = [[0, 1], [1, 0]]; }
    """
    ws = parse(source)
    assert ws.category("B") == BC2
    text = dumps(ws)
    assert "relations: g.g = id_x;" in text
    assert parse(text) == ws
    assert dumps(parse(text)) == text


def test_non_functorial_matrix_is_a_semantic_error():
    source = """
    functor Bad over BC2 field Q {
        dim x = 1;
        map g = [[2]];
    }
    """
    with pytest.raises(DSLSemanticError) as info:
        parse(source)
    assert "g∘g = id_x" in str(info.value)
    assert "line 2" in str(info.value)


def test_composite_maps_must_agree():
    source = """
    category Sq {
        objects: a, b, c;
        arrows: f: a -> b, g: b -> c;
    }
    functor F over Sq field Q {
        dim a = 1; dim b = 1; dim c = 1;
        map f = [[1]];
        map g = [[2]];
        map g.f = [[3]];
    }
    """
    with pytest.raises(DSLSemanticError, match="composite"):
        parse(source)


def test_derived_categories():
    source = """
    category P = product(Span, A2);
    category O = opposite(Span);
    category T = star(A2);
    """
    ws = parse(source)
    assert ws.category("P") == product(SPAN, A2)
    assert ws.category("O") == SPAN.opposite()
    assert ws.category("T") == one_point_extension(A2)
    assert ws.cat_defs["P"] == DerivedCat("product", ("Span", "A2"))
    assert "category T = star(A2);" in dumps(ws)


def test_functor_over_a_product():
    source = """
    category P = product(Discrete2, A2);
    functor F over P field F2 {
        dim 1|1 = 1; dim 1|2 = 1;
        map id_1|a = [[1]];
    }
    """
    f = parse(source).functor("F")
    assert f.dim["1|2"] == 1
    assert f.dim["2|1"] == 0


def test_empty_matrices():
    source = "functor Z over A2 field Q { dim 1 = 2; map a = []; }"
    f = parse(source).functor("Z")
    assert f.action["a"].shape == (0, 2)
    with pytest.raises(DSLSemanticError):
        parse("functor Z over A2 field Q { dim 1 = 1; dim 2 = 1; map a = []; }")


@pytest.mark.parametrize(
    ("source", "line", "column"),
    [
        ("category X {\n    objects: a\n}", 3, 1),
        ("functor F over Span field Q {\n  dim c = x;\n}", 2, 11),
        ("category X { objects: a; } $", 1, 28),
        ("nonsense", 1, 1),
    ],
)
def test_syntax_errors_carry_the_location(source: str, line: int, column: int):
    with pytest.raises(DSLSyntaxError) as info:
        parse(source)
    assert (info.value.line, info.value.column) == (line, column)


def test_unknown_names():
    with pytest.raises(DSLSemanticError, match="Nope"):
        parse("functor F over Nope field Q { }")
    with pytest.raises(DSLSemanticError, match="already defined"):
        parse("category X { objects: a; } category X { objects: b; }")
    with pytest.raises(UnknownName):
        Workspace().functor("F")
    with pytest.raises(DSLSemanticError):
        parse("ses s { mono: i; epi: e; }")


def test_reserved_arrow_names():
    with pytest.raises(DSLSemanticError, match="reserved"):
        parse("category X { objects: a; arrows: id_a: a -> a; }")


def test_parse_into_an_existing_workspace():
    ws = parse(SPAN_SOURCE)
    parse("functor H over S field Q { dim a = 1; }", ws)
    assert ws.functor("H").dim["a"] == 1
    assert ws.functor("K").total_dim == 3
