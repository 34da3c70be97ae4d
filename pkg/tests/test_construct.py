"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import random
from collections.abc import Callable

import pytest
from conftest import F2, mat, simple, span_rep

from abexact.construct import (
    as_constant,
    canonical_coproduct_map,
    extend_over_star,
    phi,
    phi_duality_check,
    psi,
    psi_naturality_in_a,
    pushout_eta,
    verify_colim_star,
    xi_theta,
    z_eta,
)
from abexact.errors import KernelNotConstant, NotDiscrete
from abexact.exactfield import QQ, Field, Mat
from abexact.fincat import A2, POINT, SPAN, discrete, split
from abexact.homext import classify_ses
from abexact.rep import SES, NatMap, Rep, kappa, kappa_over
from abexact.verify import bc2_augmentation_eta, span_worked_eta, split_eta


def test_worked_span_sequence(field: Field):
    zd = z_eta(span_worked_eta(field))
    assert zd.z_dim == 0
    assert zd.f_matrix.shape == (0, 1)
    assert not zd.f_is_mono
    assert zd.bottom_row() is None
    assert zd.violations() == []


def test_augmentation_sequence_depends_on_the_characteristic():
    zd = z_eta(bc2_augmentation_eta(F2))
    assert zd.z_dim == 1
    assert zd.f_matrix.is_zero()
    assert not zd.f_is_mono
    assert (zd.g_matrix @ zd.f_matrix).is_zero()
    assert zd.mu_matrix.shape[0] == zd.z_dim
    zq = z_eta(bc2_augmentation_eta(QQ))
    assert zq.f_matrix.is_invertible()
    row = zq.bottom_row()
    assert row is not None
    assert row.c.dim == {"pt": 0}


def test_split_sequence_keeps_f_mono(field: Field):
    g = Rep.from_generators(SPAN, field, {"c": 1, "a": 0, "b": 0}, {})
    zd = z_eta(split_eta(split(SPAN), kappa(POINT, 1, field), g))
    assert zd.f_is_mono


def test_as_constant(field: Field):
    sp = split(SPAN)
    assert as_constant(kappa(SPAN, 2, field), sp).dim == {"pt": 2}
    with pytest.raises(KernelNotConstant):
        as_constant(span_rep(field), sp)


def test_extension_over_the_extra_object(field: Field):
    eta = span_worked_eta(field)
    ext = extend_over_star(eta)
    assert ext.functor.validate().ok
    assert ext.split.sigma.objects[0] == "*"
    assert ext.eta_prime.c.dim["*"] == 0
    assert ext.functor.dim["*"] == 1


@pytest.mark.parametrize("build", [span_worked_eta, bc2_augmentation_eta], ids=["span", "bc2"])
def test_colimit_over_the_extension_is_z(field: Field, build: Callable[[Field], SES]):
    cert = verify_colim_star(build(field))
    assert cert.is_iso
    assert cert.colim_dims == cert.z_dims
    assert cert.comparison is not None


def test_psi_on_a_discrete_index_category(field: Field):
    sp = split(discrete(2), A2)
    f = kappa_over(sp, simple(field, "1"))
    m = psi(f, simple(field, "2"), sp, rng=random.Random(1))
    assert m.matrix.shape == (2, 2)
    assert m.is_bijective
    assert m.well_defined


def test_psi_misses_the_worked_class(field: Field):
    eta = span_worked_eta(field)
    m = psi(eta.c, kappa(POINT, 1, field))
    assert m.is_injective
    assert not m.is_surjective
    worked = classify_ses(eta, m.codomain[0])
    assert not worked.is_zero()
    assert m.preimage(worked.coords) is None
    assert m.preimage([field.zero] * m.matrix.rows) is not None


def test_phi_on_a_discrete_index_category(field: Field):
    sp = split(discrete(2), A2)
    f = kappa_over(sp, simple(field, "2"))
    m = phi(f, simple(field, "1"), sp, rng=random.Random(2))
    assert m.matrix.shape == (2, 2)
    assert m.is_bijective
    assert phi_duality_check(f, simple(field, "1"), sp).holds


def test_psi_is_natural_in_a(field: Field):
    sp = split(discrete(2), A2)
    f = kappa_over(sp, simple(field, "1"))
    s2 = simple(field, "2")
    assert psi_naturality_in_a(f, NatMap.identity(s2), sp).holds
    assert psi_naturality_in_a(f, NatMap.zero(s2, s2), sp).holds


def test_xi_theta_and_the_canonical_map(field: Field):
    sp = split(discrete(2), A2)
    f = kappa_over(sp, simple(field, "1"))
    a = simple(field, "2")
    xt = xi_theta(f, a, sp)
    assert xt.holds
    canonical = canonical_coproduct_map(f, a, sp)
    assert canonical.is_bijective
    assert canonical.matrix == xt.xi.matrix @ psi(f, a, sp).matrix


def test_single_object_canonical_map_is_the_identity(field: Field):
    sp = split(discrete(1), A2)
    f = kappa_over(sp, simple(field, "1"))
    canonical = canonical_coproduct_map(f, simple(field, "2"), sp)
    assert canonical.matrix == Mat.identity(field, 1)


def test_discrete_constructions_reject_other_shapes(field: Field):
    with pytest.raises(NotDiscrete):
        xi_theta(span_rep(field), kappa(POINT, 1, field))


def test_pushout_route(field: Field):
    out = pushout_eta(span_worked_eta(field))
    assert out.agrees
    assert not out.zeta_colim_mono
    assert out.theta.is_iso()


def test_pushout_route_from_a_mono_colimit(field: Field):
    gens = {"p": mat(field, [[1]]), "q": mat(field, [[1]])}
    n = Rep.from_generators(SPAN, field, {"c": 1, "a": 1, "b": 1}, gens)
    ses = split_eta(split(SPAN), kappa(POINT, 0, field), n)
    out = pushout_eta(ses)
    assert out.agrees
    assert out.f_eta_mono
