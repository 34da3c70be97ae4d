"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import pytest
from conftest import mat, simple, span_rep

from abexact.errors import NotACocone, NotACone, RepError, ShapeError
from abexact.exactfield import QQ, Field, Mat
from abexact.fincat import A2, BC2, POINT, SPAN, split
from abexact.rep import (
    SES,
    NatMap,
    Pullback,
    Pushout,
    Rep,
    coker_nat,
    curry,
    direct_sum,
    image_nat,
    kappa,
    kappa_map,
    kappa_over,
    ker_nat,
    pullback_nat,
    pushout_nat,
    restrict,
    uncurry,
)
from abexact.verify import span_worked_eta, split_eta


def test_from_generators_fills_in_identities(field: Field):
    f = span_rep(field)
    assert f.action["id_c"] == Mat.identity(field, 2)
    assert f.validate().ok
    assert f.total_dim == 4


def test_non_functorial_matrix_names_the_relation():
    with pytest.raises(RepError) as info:
        Rep.from_generators(BC2, QQ, {"x": 1}, {"g": mat(QQ, [[2]])})
    assert any("g∘g = id_x" in v for v in info.value.violations)


def test_wrong_shape_is_rejected():
    with pytest.raises(RepError):
        Rep.from_generators(A2, QQ, {"1": 1, "2": 2}, {"a": mat(QQ, [[1]])})


def test_naturality_is_checked(field: Field):
    k = kappa(SPAN, 1, field)
    comp = {"c": mat(field, [[1], [0]]), "a": mat(field, [[1]]), "b": mat(field, [[1]])}
    with pytest.raises(RepError):
        NatMap(k, span_rep(field), comp)


def test_natmap_algebra(field: Field):
    f = span_rep(field)
    ident = NatMap.identity(f)
    assert ident @ ident == ident
    assert (ident - ident).is_zero()
    assert ident.is_iso()
    assert ident.inverse() == ident
    assert ident + ident == ident.scale(field.coerce(2))


def test_worked_sequence_does_not_split(field: Field):
    eta = span_worked_eta(field)
    assert eta.a == kappa(SPAN, 1, field)
    assert eta.c.dim == {"c": 1, "a": 0, "b": 0}
    assert not eta.is_split()


def test_split_sequence_has_a_section(field: Field):
    sp = split(SPAN)
    g = Rep.from_generators(SPAN, field, {"c": 1, "a": 0, "b": 0}, {})
    eta = split_eta(sp, kappa(POINT, 1, field), g)
    s = eta.section()
    assert s is not None
    assert eta.epi @ s == NatMap.identity(eta.c)


def test_ses_rejects_non_exact(field: Field):
    f = span_rep(field)
    ident = NatMap.identity(f)
    with pytest.raises(RepError):
        SES(ident, ident)


def test_direct_sum_block_order(field: Field):
    left = span_rep(field)
    right = kappa(SPAN, 1, field)
    ds = direct_sum(left, right)
    assert ds.rep.dim == {"c": 3, "a": 2, "b": 2}
    assert ds.proj[0] @ ds.inj[0] == NatMap.identity(left)
    assert (ds.proj[1] @ ds.inj[0]).is_zero()
    assert ds.inj[0].comp["c"] == Mat.identity(field, 3).columns(0, 2)


def test_kernel_cokernel_image(field: Field):
    eta = span_worked_eta(field)
    k, _incl = ker_nat(eta.mono)
    assert k.total_dim == 0
    c, q = coker_nat(eta.mono)
    assert c.dim == {"c": 1, "a": 0, "b": 0}
    assert q.is_epi()
    _im, epi, mono = image_nat(eta.epi)
    assert mono @ epi == eta.epi
    assert mono.is_mono()
    assert epi.is_epi()


def test_pushout_and_pullback_squares_commute(field: Field):
    eta = span_worked_eta(field)
    f = eta.mono
    g = NatMap.identity(eta.a).scale(field.coerce(-1))
    po = Pushout(f, g)
    assert po.left @ f == po.right @ g
    assert po.rep.dim == eta.b.dim
    pb = Pullback(eta.epi, eta.epi)
    assert eta.epi @ pb.left == eta.epi @ pb.right


def test_pushout_induced_rejects_non_cocones(field: Field):
    eta = span_worked_eta(field)
    po = Pushout(eta.mono, eta.mono)
    ident = NatMap.identity(eta.b)
    assert po.induced(ident, ident) @ po.left == ident
    with pytest.raises(NotACocone):
        po.induced(ident, NatMap.zero(eta.b, eta.b))


def test_kappa_over_and_curry(field: Field):
    sp = split(SPAN, A2)
    a = Rep.from_generators(A2, field, {"1": 1, "2": 2}, {"a": mat(field, [[1], [1]])})
    k = kappa_over(sp, a)
    assert k.validate().ok
    assert restrict(k, sp, "c") == a
    cur = curry(k, sp)
    assert uncurry(sp, cur.family, cur.maps) == k
    assert cur.maps["p"] == NatMap.identity(a)


def test_uncurry_names_what_is_missing(field: Field):
    sp = split(SPAN, A2)
    cur = curry(kappa_over(sp, simple(field, "1")), sp)
    with pytest.raises(ShapeError, match="empty family"):
        uncurry(sp, {}, {})
    family = {i: r for i, r in cur.family.items() if i != "b"}
    with pytest.raises(ShapeError, match="nothing given for b"):
        uncurry(sp, family, cur.maps)
    maps = {n: m for n, m in cur.maps.items() if n != "q"}
    with pytest.raises(ShapeError, match="nothing given for q"):
        uncurry(sp, cur.family, maps)


def test_pullback_induced_and_constant_maps(field: Field):
    eta = span_worked_eta(field)
    pb = pullback_nat(eta.epi, eta.epi)
    ident = NatMap.identity(eta.b)
    m = pb.induced(ident, ident)
    assert pb.left @ m == ident
    assert pb.right @ m == ident
    with pytest.raises(NotACone):
        pb.induced(ident, NatMap.zero(eta.b, eta.b))
    k = kappa_map(SPAN, mat(field, [[1, 1]]))
    assert k.src == kappa(SPAN, 2, field)
    assert k.is_epi()
    assert pushout_nat(k, k).rep.dim == {"c": 1, "a": 1, "b": 1}
