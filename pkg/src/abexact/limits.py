"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import logging
from collections.abc import Mapping

from .errors import NotACocone, NotACone, ShapeError, UniversalPropertyError
from .exactfield import Field, Mat, cokernel, kernel, left_solve, solve
from .fincat import POINT, FinCat, Split, split
from .rep import NatMap, Rep, curry, kappa, kappa_over, restrict

log = logging.getLogger(__name__)

__all__ = [
    "ColimData",
    "LimData",
    "codiagonal",
    "codiagonal_nat",
    "colim",
    "colim_map",
    "diagonal",
    "diagonal_nat",
    "induced_from_cocone",
    "induced_from_cocone_nat",
    "induced_to_cone",
    "induced_to_cone_nat",
    "lim",
    "lim_map",
    "rho_nat",
    "varrho_nat",
]


def _split_for(f: Rep, sp: Split | None) -> Split:
    sp = split(f.cat) if sp is None else sp
    if f.cat != sp.flat:
        msg = f"{f!r} is not a diagram over {sp.sigma.name} in Fun({sp.delta.name}, Vect)"
        raise ShapeError(msg)
    return sp


def _slots(f: Rep, sp: Split, x: str) -> tuple[dict[str, int], int]:
    offsets: dict[str, int] = {}
    n = 0
    for i in sp.sigma.objects:
        offsets[i] = n
        n += f.dim[sp.obj(i, x)]
    return offsets, n


def _fibre_blocks(f: Rep, sp: Split, beta: str) -> Mat:
    """``⊕_i F(1_i, beta)`` in slot order."""
    return Mat.block_diag(
        f.field, [f.action[sp.mor(sp.sigma.identity[i], beta)] for i in sp.sigma.objects]
    )


def _relation_map(f: Rep, sp: Split, x: str) -> Mat:
    """Slot λ sends ``v`` to ``ι_tgt F(λ) v - ι_src v``."""
    field = f.field
    _offsets, n = _slots(f, sp, x)
    ident_x = sp.delta.identity[x]
    cols: list[Mat] = []
    for lam in sp.sigma.non_identities:
        d_src = f.dim[sp.obj(lam.src, x)]
        blocks: list[Mat] = []
        for k in sp.sigma.objects:
            d_k = f.dim[sp.obj(k, x)]
            block = Mat.zeros(field, d_k, d_src)
            if k == lam.tgt:
                block += f.action[sp.mor(lam.name, ident_x)]
            if k == lam.src:
                block -= Mat.identity(field, d_k)
            blocks.append(block)
        cols.append(Mat.vstack(field, blocks, d_src))
    return Mat.hstack(field, cols, n)


def _cone_map(f: Rep, sp: Split, x: str) -> Mat:
    """``(v_i) -> (F(λ) v_src - v_tgt)`` over every non-identity λ."""
    field = f.field
    _offsets, n = _slots(f, sp, x)
    ident_x = sp.delta.identity[x]
    rows: list[Mat] = []
    for lam in sp.sigma.non_identities:
        d_tgt = f.dim[sp.obj(lam.tgt, x)]
        blocks: list[Mat] = []
        for k in sp.sigma.objects:
            d_k = f.dim[sp.obj(k, x)]
            block = Mat.zeros(field, d_tgt, d_k)
            if k == lam.src:
                block += f.action[sp.mor(lam.name, ident_x)]
            if k == lam.tgt:
                block -= Mat.identity(field, d_k)
            blocks.append(block)
        rows.append(Mat.hstack(field, blocks, d_tgt))
    return Mat.vstack(field, rows, n)


class ColimData:
    """The Σ-colimit of ``functor``: apex ``C_F`` over Δ and structure maps ``ρ_i``."""

    __slots__ = ("apex", "functor", "offsets", "proj", "rho", "split")

    def __init__(
        self,
        functor: Rep,
        sp: Split,
        apex: Rep,
        proj: dict[str, Mat],
        rho: dict[str, NatMap],
        offsets: dict[str, dict[str, int]],
    ) -> None:
        self.functor = functor
        self.split = sp
        self.apex = apex
        self.proj = proj
        self.rho = rho
        self.offsets = offsets

    def __repr__(self) -> str:
        return f"<ColimData of {self.functor!r}: apex {self.apex!r}>"

    @property
    def apex_dim(self) -> int:
        return self.apex.dim[_point_object(self.split)]

    @property
    def proj_matrix(self) -> Mat:
        return self.proj[_point_object(self.split)]

    def leg(self, i: str) -> Mat:
        return self.rho[i].comp[_point_object(self.split)]


class LimData:
    """The Σ-limit of ``functor``: apex ``L_F`` over Δ and structure maps ``ϱ_i``."""

    __slots__ = ("apex", "functor", "incl", "offsets", "split", "varrho")

    def __init__(
        self,
        functor: Rep,
        sp: Split,
        apex: Rep,
        incl: dict[str, Mat],
        varrho: dict[str, NatMap],
        offsets: dict[str, dict[str, int]],
    ) -> None:
        self.functor = functor
        self.split = sp
        self.apex = apex
        self.incl = incl
        self.varrho = varrho
        self.offsets = offsets

    def __repr__(self) -> str:
        return f"<LimData of {self.functor!r}: apex {self.apex!r}>"

    @property
    def apex_dim(self) -> int:
        return self.apex.dim[_point_object(self.split)]

    @property
    def incl_matrix(self) -> Mat:
        return self.incl[_point_object(self.split)]

    def leg(self, i: str) -> Mat:
        return self.varrho[i].comp[_point_object(self.split)]


def _point_object(sp: Split) -> str:
    if not sp.over_point:
        msg = "Matrix views of (co)limits exist only over the point base"
        raise ShapeError(msg)
    return POINT.objects[0]


def colim(f: Rep, sp: Split | None = None) -> ColimData:
    sp = _split_for(f, sp)
    field = f.field
    proj: dict[str, Mat] = {}
    offsets: dict[str, dict[str, int]] = {}
    for x in sp.delta.objects:
        offsets[x], _n = _slots(f, sp, x)
        proj[x] = cokernel(_relation_map(f, sp, x))

    action: dict[str, Mat] = {}
    for beta in sp.delta.morphisms:
        m = left_solve(proj[beta.src], proj[beta.tgt] @ _fibre_blocks(f, sp, beta.name))
        if m is None:
            msg = f"Colimit apex is not functorial at {beta.name}"
            log.error("%s", msg)
            raise UniversalPropertyError(msg)
        action[beta.name] = m
    apex = Rep(sp.delta, field, {x: p.rows for x, p in proj.items()}, action)

    rho: dict[str, NatMap] = {}
    for i in sp.sigma.objects:
        comp = {
            x: proj[x].columns(offsets[x][i], offsets[x][i] + f.dim[sp.obj(i, x)])
            for x in sp.delta.objects
        }
        rho[i] = NatMap(restrict(f, sp, i), apex, comp)
    log.debug("colim over %s: apex dims %s", sp.sigma.name, apex.dim)
    return ColimData(f, sp, apex, proj, rho, offsets)


def lim(f: Rep, sp: Split | None = None) -> LimData:
    sp = _split_for(f, sp)
    field = f.field
    incl: dict[str, Mat] = {}
    offsets: dict[str, dict[str, int]] = {}
    for x in sp.delta.objects:
        offsets[x], _n = _slots(f, sp, x)
        incl[x] = kernel(_cone_map(f, sp, x))

    action: dict[str, Mat] = {}
    for beta in sp.delta.morphisms:
        m = solve(incl[beta.tgt], _fibre_blocks(f, sp, beta.name) @ incl[beta.src])
        if m is None:
            msg = f"Limit apex is not functorial at {beta.name}"
            log.error("%s", msg)
            raise UniversalPropertyError(msg)
        action[beta.name] = m
    apex = Rep(sp.delta, field, {x: k.cols for x, k in incl.items()}, action)

    varrho: dict[str, NatMap] = {}
    for i in sp.sigma.objects:
        comp = {
            x: incl[x].row_slice(offsets[x][i], offsets[x][i] + f.dim[sp.obj(i, x)])
            for x in sp.delta.objects
        }
        varrho[i] = NatMap(apex, restrict(f, sp, i), comp)
    return LimData(f, sp, apex, incl, varrho, offsets)


def rho_nat(cd: ColimData) -> NatMap:
    """``ρ^F: F -> κ(C_F)`` as one natural map over Σ x Δ."""
    sp = cd.split
    comp = {sp.obj(i, x): cd.rho[i].comp[x] for i in sp.sigma.objects for x in sp.delta.objects}
    return NatMap(cd.functor, kappa_over(sp, cd.apex), comp)


def varrho_nat(ld: LimData) -> NatMap:
    """``ϱ^F: κ(L_F) -> F``."""
    sp = ld.split
    comp = {sp.obj(i, x): ld.varrho[i].comp[x] for i in sp.sigma.objects for x in sp.delta.objects}
    return NatMap(kappa_over(sp, ld.apex), ld.functor, comp)


def induced_from_cocone_nat(
    cd: ColimData, legs: Mapping[str, NatMap], target: Rep
) -> NatMap:
    """The unique ``f: C_F -> target`` with ``f ∘ ρ_i = legs[i]`` for every object ``i``."""
    sp = cd.split
    family = curry(cd.functor, sp)
    for lam in sp.sigma.non_identities:
        if legs[lam.tgt] @ family.maps[lam.name] != legs[lam.src]:
            msg = f"legs[{lam.tgt}] ∘ F({lam.name}) != legs[{lam.src}]"
            raise NotACocone(msg)
    field = cd.functor.field
    comp: dict[str, Mat] = {}
    for x in sp.delta.objects:
        stacked = Mat.hstack(field, [legs[i].comp[x] for i in sp.sigma.objects], target.dim[x])
        m = left_solve(cd.proj[x], stacked)
        if m is None:
            msg = f"No map out of the colimit at {x}, although the legs form a cocone"
            log.error("%s", msg)
            raise UniversalPropertyError(msg)
        # f ∘ proj = 0 forces f = 0, so the solution is unique
        assert cd.proj[x].is_surjective()
        comp[x] = m
    return NatMap(cd.apex, target, comp)


def induced_to_cone_nat(ld: LimData, legs: Mapping[str, NatMap], source: Rep) -> NatMap:
    """The unique ``f: source -> L_F`` with ``ϱ_i ∘ f = legs[i]``."""
    sp = ld.split
    family = curry(ld.functor, sp)
    for lam in sp.sigma.non_identities:
        if family.maps[lam.name] @ legs[lam.src] != legs[lam.tgt]:
            msg = f"F({lam.name}) ∘ legs[{lam.src}] != legs[{lam.tgt}]"
            raise NotACone(msg)
    field = ld.functor.field
    comp: dict[str, Mat] = {}
    for x in sp.delta.objects:
        stacked = Mat.vstack(field, [legs[i].comp[x] for i in sp.sigma.objects], source.dim[x])
        m = solve(ld.incl[x], stacked)
        if m is None:
            msg = f"No map into the limit at {x}, although the legs form a cone"
            log.error("%s", msg)
            raise UniversalPropertyError(msg)
        assert ld.incl[x].is_injective()
        comp[x] = m
    return NatMap(source, ld.apex, comp)


def _point_rep(field: Field, dim: int) -> Rep:
    return Rep(POINT, field, {"pt": dim}, {"id_pt": Mat.identity(field, dim)}, check=False)


def induced_from_cocone(
    cd: ColimData, legs: Mapping[str, Mat], target_dim: int | None = None
) -> Mat:
    """Point-base form of :func:`induced_from_cocone_nat` on plain matrices."""
    _point_object(cd.split)
    field = cd.functor.field
    if target_dim is None:
        if not legs:
            msg = "target_dim is required when the diagram has no objects"
            raise ShapeError(msg)
        target_dim = next(iter(legs.values())).rows
    target = _point_rep(field, target_dim)
    nat_legs = {
        i: NatMap(restrict(cd.functor, cd.split, i), target, {"pt": legs[i]})
        for i in cd.split.sigma.objects
    }
    return induced_from_cocone_nat(cd, nat_legs, target).comp["pt"]


def induced_to_cone(ld: LimData, legs: Mapping[str, Mat], source_dim: int | None = None) -> Mat:
    _point_object(ld.split)
    field = ld.functor.field
    if source_dim is None:
        if not legs:
            msg = "source_dim is required when the diagram has no objects"
            raise ShapeError(msg)
        source_dim = next(iter(legs.values())).cols
    source = _point_rep(field, source_dim)
    nat_legs = {
        i: NatMap(source, restrict(ld.functor, ld.split, i), {"pt": legs[i]})
        for i in ld.split.sigma.objects
    }
    return induced_to_cone_nat(ld, nat_legs, source).comp["pt"]


def codiagonal_nat(sp: Split, a: Rep) -> tuple[ColimData, NatMap]:
    """``∇^A: colim κ(A) -> A`` with the colimit it starts from."""
    cd = colim(kappa_over(sp, a), sp)
    legs = {i: NatMap.identity(a) for i in sp.sigma.objects}
    return cd, induced_from_cocone_nat(cd, legs, a)


def diagonal_nat(sp: Split, a: Rep) -> tuple[LimData, NatMap]:
    """``Δ^A: A -> lim κ(A)``."""
    ld = lim(kappa_over(sp, a), sp)
    legs = {i: NatMap.identity(a) for i in sp.sigma.objects}
    return ld, induced_to_cone_nat(ld, legs, a)


def codiagonal(c: FinCat, dim: int, field: Field) -> Mat:
    cd = colim(kappa(c, dim, field))
    return induced_from_cocone(cd, dict.fromkeys(c.objects, Mat.identity(field, dim)), dim)


def diagonal(c: FinCat, dim: int, field: Field) -> Mat:
    ld = lim(kappa(c, dim, field))
    return induced_to_cone(ld, dict.fromkeys(c.objects, Mat.identity(field, dim)), dim)


def colim_map(
    phi: NatMap, sp: Split | None = None, src: ColimData | None = None, tgt: ColimData | None = None
) -> NatMap:
    """``colim(φ): C_F -> C_G``."""
    sp = _split_for(phi.src, sp)
    src = colim(phi.src, sp) if src is None else src
    tgt = colim(phi.tgt, sp) if tgt is None else tgt
    field = phi.field
    comp: dict[str, Mat] = {}
    for x in sp.delta.objects:
        blocks = Mat.block_diag(field, [phi.comp[sp.obj(i, x)] for i in sp.sigma.objects])
        m = left_solve(src.proj[x], tgt.proj[x] @ blocks)
        if m is None:
            msg = f"colim of a natural map does not factor at {x}"
            log.error("%s", msg)
            raise UniversalPropertyError(msg)
        comp[x] = m
    return NatMap(src.apex, tgt.apex, comp)


def lim_map(
    phi: NatMap, sp: Split | None = None, src: LimData | None = None, tgt: LimData | None = None
) -> NatMap:
    sp = _split_for(phi.src, sp)
    src = lim(phi.src, sp) if src is None else src
    tgt = lim(phi.tgt, sp) if tgt is None else tgt
    field = phi.field
    comp: dict[str, Mat] = {}
    for x in sp.delta.objects:
        blocks = Mat.block_diag(field, [phi.comp[sp.obj(i, x)] for i in sp.sigma.objects])
        m = solve(tgt.incl[x], blocks @ src.incl[x])
        if m is None:
            msg = f"lim of a natural map does not factor at {x}"
            log.error("%s", msg)
            raise UniversalPropertyError(msg)
        comp[x] = m
    return NatMap(src.apex, tgt.apex, comp)
