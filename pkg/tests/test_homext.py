"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import itertools
import random

import pytest
from conftest import F2, F3, simple, span_rep

from abexact.errors import ShapeError
from abexact.exactfield import QQ, Field
from abexact.fincat import A2, BC2, POINT, SPAN, FinCat, split
from abexact.homext import (
    ExtClass,
    classify_ses,
    dual,
    dual_ses,
    equivalent,
    ext1,
    ext_dual,
    ext_pushout,
    hom_space,
    injective_cogenerator,
    injective_embedding,
    is_injective,
    is_projective,
    realize_class,
    representable,
    yoneda_counit,
)
from abexact.rep import NatMap, kappa
from abexact.verify import bc2_augmentation_eta, brute_force_ext_dim, enumerate_reps, span_worked_eta, split_eta


def test_representables(field: Field):
    assert representable(A2, "1", field).dim == {"1": 1, "2": 1}
    assert representable(A2, "2", field).dim == {"1": 0, "2": 1}
    assert representable(SPAN, "c", field).dim == {"c": 1, "a": 1, "b": 1}
    assert representable(BC2, "x", field).dim == {"x": 2}


def test_yoneda(field: Field):
    f = span_rep(field)
    assert hom_space(representable(SPAN, "c", field), f).dim == f.dim["c"]
    free, counit = yoneda_counit(f)
    assert counit.is_epi()
    assert len(free.tops) == f.total_dim


def test_projectives_and_injectives_over_a2(field: Field):
    assert is_projective(simple(field, "2")).holds
    assert not is_projective(simple(field, "1")).holds
    assert is_injective(simple(field, "1")).holds
    assert not is_injective(simple(field, "2")).holds
    test = is_projective(representable(A2, "1", field))
    assert test.holds
    assert test.witness is not None


def test_failed_split_tests_carry_a_refutation(field: Field):
    for test in (is_projective(simple(field, "1")), is_injective(simple(field, "2"))):
        assert test.witness is None
        assert test.refutation is not None
        assert test.refutation.holds()
    assert is_projective(simple(field, "2")).refutation is None
    augmentation = is_projective(kappa(BC2, 1, F2))
    assert augmentation.refutation is not None
    assert augmentation.refutation.holds()


def test_group_algebra_projectivity_depends_on_the_characteristic():
    assert is_projective(kappa(BC2, 1, QQ)).holds
    assert is_projective(kappa(BC2, 1, F3)).holds
    assert not is_projective(kappa(BC2, 1, F2)).holds
    assert not is_injective(kappa(BC2, 1, F2)).holds


def test_injective_cogenerator(field: Field):
    for cat in (A2, SPAN):
        assert is_injective(injective_cogenerator(cat, field)).holds


def test_injective_embedding(field: Field):
    f = span_rep(field)
    j, mono = injective_embedding(f)
    assert mono.is_mono()
    assert is_injective(j).holds


def test_dual_is_an_involution(field: Field):
    f = span_rep(field)
    assert dual(f).cat == SPAN.opposite()
    assert dual(dual(f)) == f


def test_a2_ext_between_simples(field: Field):
    assert ext1(simple(field, "1"), simple(field, "2")).dim == 1
    assert ext1(simple(field, "2"), simple(field, "1")).dim == 0
    assert ext1(representable(A2, "1", field), simple(field, "2")).dim == 0


def test_ext_presentation_is_the_yoneda_counit(field: Field):
    f = span_rep(field)
    space = ext1(f, kappa(SPAN, 1, field))
    free, _counit = yoneda_counit(f)
    assert space.free.tops == free.tops
    assert len(space.free.tops) == f.total_dim
    assert space.p.is_epi()
    assert space.dim == 0


def test_bc2_trivial_self_extensions():
    assert ext1(kappa(BC2, 1, F2), kappa(BC2, 1, F2)).dim == 1
    assert ext1(kappa(BC2, 1, QQ), kappa(BC2, 1, QQ)).dim == 0
    eta = bc2_augmentation_eta(F2)
    assert not classify_ses(eta).is_zero()


def test_classify_the_worked_sequence(field: Field):
    eta = span_worked_eta(field)
    x = classify_ses(eta)
    assert not x.is_zero()
    assert equivalent(realize_class(x), eta) is not None


def test_split_sequences_classify_to_zero(field: Field):
    eta = split_eta(split(SPAN), kappa(POINT, 1, field), span_rep(field))
    assert classify_ses(eta).is_zero()


def test_realized_classes_round_trip(field: Field):
    rng = random.Random(3)
    space = ext1(simple(field, "1"), simple(field, "2"))
    for x in space.basis():
        s = realize_class(x, rng)
        assert classify_ses(s, space).coords == x.coords
    assert realize_class(space.zero()).is_split()


def test_realize_rejects_wrong_length(field: Field):
    space = ext1(simple(field, "1"), simple(field, "2"))
    with pytest.raises(ShapeError):
        realize_class(ExtClass(space, ()))


def test_ext_transport_maps(field: Field):
    s1, s2 = simple(field, "1"), simple(field, "2")
    space = ext1(s1, s2)
    target = ext1(dual(s2), dual(s1))
    assert ext_dual(space, target).is_invertible()
    assert classify_ses(dual_ses(realize_class(space.basis()[0]))).space.dim == target.dim
    zero = ext_pushout(space, NatMap.zero(s2, s2), space)
    assert zero.is_zero()
    ident = ext_pushout(space, NatMap.identity(s2), space)
    assert ident.is_invertible()


@pytest.mark.parametrize(("cat", "max_dim"), [(A2, 1), (SPAN, 1), (BC2, 1)], ids=["A2", "Span", "BC2"])
def test_ext_agrees_with_brute_force(cat: FinCat, max_dim: int):
    reps = list(enumerate_reps(cat, F2, max_dim))
    assert reps
    for m, n in itertools.product(reps, repeat=2):
        assert ext1(m, n).dim == brute_force_ext_dim(m, n)
