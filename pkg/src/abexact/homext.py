"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import logging
import random
from collections.abc import Callable, Sequence
from typing import NamedTuple

from .errors import RepError, ShapeError, UniversalPropertyError
from .exactfield import Field, Inconsistency, Mat, Scalar, cokernel, solve
from .fincat import FinCat
from .rep import (
    SES,
    NatMap,
    Pullback,
    Pushout,
    Rep,
    direct_sum_many,
    ker_nat,
    nat_equations,
)

log = logging.getLogger(__name__)

__all__ = [
    "ExtClass",
    "ExtSpace",
    "Free",
    "HomSpace",
    "SplitTest",
    "classify_ses",
    "counit_generators",
    "dual",
    "dual_map",
    "dual_ses",
    "equivalent",
    "ext1",
    "ext_dual",
    "ext_pullback",
    "ext_pushout",
    "free_generator",
    "generating_tops",
    "hom_space",
    "injective_cogenerator",
    "injective_embedding",
    "is_injective",
    "is_projective",
    "pullback_ses",
    "pushout_ses",
    "realize_class",
    "representable",
    "yoneda_counit",
]


def _column(field: Field, values: Sequence[Scalar]) -> Mat:
    return Mat(field, len(values), 1, tuple((v,) for v in values))


def _unit(field: Field, n: int, r: int) -> tuple[Scalar, ...]:
    return tuple(field.one if k == r else field.zero for k in range(n))


def representable(c: FinCat, i: str, field: Field) -> Rep:
    """``R_i = k c(i, -)``, acting by post-composition on the morphism basis."""
    dim = {j: len(c.hom(i, j)) for j in c.objects}
    action: dict[str, Mat] = {}
    for lam in c.morphisms:
        src_basis = c.hom(i, lam.src)
        tgt_index = {m: k for k, m in enumerate(c.hom(i, lam.tgt))}
        rows = [[field.zero] * len(src_basis) for _ in range(dim[lam.tgt])]
        for col, m in enumerate(src_basis):
            rows[tgt_index[c.compose[lam.name, m]]][col] = field.one
        action[lam.name] = Mat(field, dim[lam.tgt], dim[lam.src], tuple(tuple(r) for r in rows))
    return Rep(c, field, dim, action)


class Free:
    """A direct sum of representables; summand ``t`` is generated by ``id`` at ``tops[t]``."""

    __slots__ = ("cat", "field", "rep", "tops")

    def __init__(self, cat: FinCat, field: Field, tops: Sequence[str]) -> None:
        self.cat = cat
        self.field = field
        self.tops = tuple(tops)
        if self.tops:
            self.rep = direct_sum_many([representable(cat, i, field) for i in self.tops]).rep
        else:
            self.rep = Rep.zero(cat, field)

    def __repr__(self) -> str:
        return f"<Free over {self.cat.name} on {list(self.tops)}>"

    def map_to(self, target: Rep, images: Sequence[Sequence[Scalar]]) -> NatMap:
        """The natural map sending generator ``t`` to ``images[t]`` in ``target(tops[t])``."""
        if len(images) != len(self.tops):
            msg = f"Expected {len(self.tops)} generator images, got {len(images)}"
            raise ShapeError(msg)
        field = self.field
        vecs = [_column(field, v) for v in images]
        comp: dict[str, Mat] = {}
        for j in self.cat.objects:
            cols: list[Mat] = [
                target.action[m] @ vecs[t]
                for t, top in enumerate(self.tops)
                for m in self.cat.hom(top, j)
            ]
            comp[j] = Mat.hstack(field, cols, target.dim[j])
        return NatMap(self.rep, target, comp)


def counit_generators(f: Rep) -> tuple[list[str], list[tuple[Scalar, ...]]]:
    """One generator per basis vector of every ``F(i)``, in object order."""
    tops: list[str] = []
    images: list[tuple[Scalar, ...]] = []
    for i in f.cat.objects:
        for r in range(f.dim[i]):
            tops.append(i)
            images.append(_unit(f.field, f.dim[i], r))
    return tops, images


def yoneda_counit(f: Rep) -> tuple[Free, NatMap]:
    """``⊕_i R_i^{dim F(i)} -> F``, one generator per basis vector of every ``F(i)``."""
    tops, images = counit_generators(f)
    free = Free(f.cat, f.field, tops)
    return free, free.map_to(f, images)


def generating_tops(f: Rep) -> tuple[list[str], list[tuple[Scalar, ...]]]:
    """Basis vectors that generate ``f``, chosen greedily in object order."""
    field = f.field
    spans = {j: Mat.zeros(field, f.dim[j], 0) for j in f.cat.objects}
    tops: list[str] = []
    images: list[tuple[Scalar, ...]] = []
    for i in f.cat.objects:
        for r in range(f.dim[i]):
            e = _column(field, _unit(field, f.dim[i], r))
            if solve(spans[i], e) is not None:
                continue
            tops.append(i)
            images.append(e.column(0))
            for j in f.cat.objects:
                new = [f.action[m] @ e for m in f.cat.hom(i, j)]
                if new:
                    spans[j] = Mat.hstack(field, [spans[j], *new], f.dim[j]).column_basis()
    return tops, images


def free_generator(c: FinCat, field: Field) -> Rep:
    """``⊕_i R_i``, one representable per object."""
    return Free(c, field, c.objects).rep


class HomSpace:
    """A basis of the natural maps ``src -> tgt``."""

    __slots__ = ("_matrix", "basis", "src", "tgt")

    def __init__(self, src: Rep, tgt: Rep, basis: Sequence[NatMap]) -> None:
        self.src = src
        self.tgt = tgt
        self.basis = tuple(basis)
        rows = sum(src.dim[i] * tgt.dim[i] for i in src.cat.objects)
        self._matrix = Mat.from_columns(src.field, [b.flatten() for b in self.basis], rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, phi: NatMap) -> tuple[Scalar, ...]:
        flat = _column(phi.field, phi.flatten())
        x = solve(self._matrix, flat)
        if x is None:
            msg = "Map is not in the span of the Hom basis"
            log.error("%s", msg)
            raise UniversalPropertyError(msg)
        return x.column(0)

    def combine(self, coeffs: Sequence[Scalar]) -> NatMap:
        field = self.src.field
        comp: dict[str, Mat] = {}
        for i in self.src.cat.objects:
            acc = Mat.zeros(field, self.tgt.dim[i], self.src.dim[i])
            for c, b in zip(coeffs, self.basis, strict=True):
                if c:
                    acc += b.comp[i].scale(c)
            comp[i] = acc
        return NatMap(self.src, self.tgt, comp)


def hom_space(f: Rep, g: Rep) -> HomSpace:
    if f.cat != g.cat or f.field != g.field:
        msg = "Hom needs representations of one category over one field"
        raise RepError(msg, [msg])
    sols = nat_equations(f, g).null_space()
    return HomSpace(f, g, [NatMap(f, g, s) for s in sols])


class SplitTest(NamedTuple):
    holds: bool
    witness: NatMap | None
    detail: str
    refutation: Inconsistency | None = None


def is_projective(f: Rep) -> SplitTest:
    """Split test on the Yoneda counit. The witness is a section ``s`` with ``p ∘ s = 1``."""
    free, p = yoneda_counit(f)
    eqs = nat_equations(f, free.rep)
    for i in f.cat.objects:
        eqs.add(
            [(i, p.comp[i], Mat.identity(f.field, f.dim[i]))],
            Mat.identity(f.field, f.dim[i]),
        )
    sol = eqs.solve()
    if sol is None:
        detail = (
            f"no natural section of the counit from {len(free.tops)} representables: "
            f"{eqs.nvars} unknowns, the section system is inconsistent"
        )
        return SplitTest(False, None, detail, eqs.inconsistency())
    detail = f"section of the counit from {len(free.tops)} representables"
    return SplitTest(True, NatMap(f, free.rep, sol), detail)


def is_injective(f: Rep) -> SplitTest:
    """Projectivity of the dual over the opposite category. The witness is a retraction."""
    test = is_projective(dual(f))
    if test.witness is None:
        return SplitTest(False, None, f"dual: {test.detail}", test.refutation)
    s = test.witness
    retraction = NatMap(dual(s.tgt), f, {i: m.T for i, m in s.comp.items()})
    return SplitTest(True, retraction, f"dual: {test.detail}")


# duality


def dual(f: Rep) -> Rep:
    """Pointwise dual space, a representation of the opposite category."""
    op = f.cat.opposite()
    return Rep(op, f.field, f.dim, {m: a.T for m, a in f.action.items()}, check=False)


def dual_map(phi: NatMap) -> NatMap:
    return NatMap(dual(phi.tgt), dual(phi.src), {i: m.T for i, m in phi.comp.items()})


def dual_ses(s: SES) -> SES:
    """``A -> B -> C`` becomes ``C* -> B* -> A*``."""
    return SES(dual_map(s.epi), dual_map(s.mono))


def injective_embedding(x: Rep) -> tuple[Rep, NatMap]:
    """``x -> J`` into an injective, the dual of a pruned Yoneda cover of ``x*``."""
    dx = dual(x)
    tops, images = counit_generators(dx)
    k = 0
    while k < len(tops):
        trial_tops = tops[:k] + tops[k + 1 :]
        trial_images = images[:k] + images[k + 1 :]
        if Free(dx.cat, dx.field, trial_tops).map_to(dx, trial_images).is_epi():
            tops, images = trial_tops, trial_images
        else:
            k += 1
    free = Free(dx.cat, dx.field, tops)
    p = free.map_to(dx, images)
    j = dual(free.rep)
    mono = NatMap(x, j, {i: m.T for i, m in p.comp.items()})
    return j, mono


def injective_cogenerator(delta: FinCat, field: Field) -> Rep:
    """The dual of the free generator over the opposite category."""
    return dual(free_generator(delta.opposite(), field))


# extensions


def pullback_ses(s: SES, t: NatMap) -> SES:
    """``s`` pulled back along ``t: M' -> C``."""
    pb = Pullback(s.epi, t)
    mono = pb.induced(s.mono, NatMap.zero(s.a, t.src))
    return SES(mono, pb.right)


def pushout_ses(s: SES, a: NatMap) -> SES:
    """``s`` pushed out along ``a: A -> N'``."""
    po = Pushout(s.mono, a)
    epi = po.induced(s.epi, NatMap.zero(a.tgt, s.c))
    return SES(po.right, epi)


class ExtSpace:
    """``Ext¹(M, N)`` from ``0 -> K -> P0 -> M -> 0``, as ``Hom(K, N)`` modulo restrictions.

    ``q`` maps ``Hom(K, N)`` coordinates onto class coordinates and ``s`` is a section of ``q``.
    """

    __slots__ = (
        "K",
        "M",
        "N",
        "free",
        "hom_k",
        "images",
        "iota",
        "p",
        "q",
        "restriction",
        "s",
        "yoneda_images",
    )

    def __init__(self, m: Rep, n: Rep) -> None:
        if m.cat != n.cat or m.field != n.field:
            msg = "Ext needs representations of one category over one field"
            raise RepError(msg, [msg])
        field = m.field
        self.M = m
        self.N = n
        tops, images = counit_generators(m)
        self.free = Free(m.cat, field, tops)
        self.images = images
        self.p = self.free.map_to(m, images)
        self.K, self.iota = ker_nat(self.p)
        self.hom_k = hom_space(self.K, n)

        self.yoneda_images: list[list[tuple[Scalar, ...]]] = []
        for t, top in enumerate(tops):
            for r in range(n.dim[top]):
                imgs = [
                    _unit(field, n.dim[top], r) if u == t else (field.zero,) * n.dim[tops[u]]
                    for u in range(len(tops))
                ]
                self.yoneda_images.append(imgs)
        cols = [
            self.hom_k.coords(self.free.map_to(n, imgs) @ self.iota) for imgs in self.yoneda_images
        ]
        self.restriction = Mat.from_columns(field, cols, self.hom_k.dim)
        self.q = cokernel(self.restriction)
        s = solve(self.q, Mat.identity(field, self.q.rows))
        assert s is not None, "cokernel projections have full row rank"
        self.s = s
        log.debug(
            "Ext over %s: presentation on %d generators, Hom(K, N) dim %d, Ext dim %d",
            m.cat.name,
            len(tops),
            self.hom_k.dim,
            self.dim,
        )

    def __repr__(self) -> str:
        return f"<ExtSpace dim {self.dim} of {self.M!r} by {self.N!r}>"

    @property
    def dim(self) -> int:
        return self.q.rows

    @property
    def field(self) -> Field:
        return self.M.field

    def basis(self) -> list[ExtClass]:
        return [ExtClass(self, _unit(self.field, self.dim, k)) for k in range(self.dim)]

    def zero(self) -> ExtClass:
        return ExtClass(self, (self.field.zero,) * self.dim)

    def cocycle(self, coords: Sequence[Scalar]) -> NatMap:
        """A map ``K -> N`` representing the class with these coordinates."""
        v = self.s @ _column(self.field, coords)
        return self.hom_k.combine(v.column(0))

    def coords_of(self, h: NatMap) -> tuple[Scalar, ...]:
        return (self.q @ _column(self.field, self.hom_k.coords(h))).column(0)

    def coboundary(self, rng: random.Random) -> NatMap:
        total = NatMap.zero(self.K, self.N)
        for imgs in self.yoneda_images:
            c = self.field.sample(rng)
            if c:
                total += (self.free.map_to(self.N, imgs) @ self.iota).scale(c)
        return total


class ExtClass(NamedTuple):
    space: ExtSpace
    coords: tuple[Scalar, ...]

    def is_zero(self) -> bool:
        return not any(self.coords)


def ext1(m: Rep, n: Rep) -> ExtSpace:
    return ExtSpace(m, n)


def classify_ses(s: SES, space: ExtSpace | None = None) -> ExtClass:
    """Lift the presentation through the epi, restrict to ``K`` and read off coordinates."""
    space = ext1(s.c, s.a) if space is None else space
    if s.a != space.N or s.c != space.M:
        msg = "Sequence end terms do not match the Ext space"
        raise RepError(msg, [msg])
    field = s.field
    lifts: list[tuple[Scalar, ...]] = []
    for top, image in zip(space.free.tops, space.images, strict=True):
        u = solve(s.epi.comp[top], _column(field, image))
        assert u is not None, "epis are pointwise surjective"
        lifts.append(u.column(0))
    lift = space.free.map_to(s.b, lifts)
    restricted = lift @ space.iota
    comp: dict[str, Mat] = {}
    for i in s.cat.objects:
        h = solve(s.mono.comp[i], restricted.comp[i])
        if h is None:
            msg = f"Lifted presentation does not land in the kernel at {i}"
            log.error("%s", msg)
            raise UniversalPropertyError(msg)
        comp[i] = h
    cocycle = NatMap(space.K, space.N, comp)
    return ExtClass(space, space.coords_of(cocycle))


def realize_class(x: ExtClass, rng: random.Random | None = None) -> SES:
    """Push the presentation out along a cocycle of ``x``; ``rng`` adds a random coboundary."""
    space = x.space
    if len(x.coords) != space.dim:
        msg = f"Class has {len(x.coords)} coordinates, the space has dimension {space.dim}"
        raise ShapeError(msg)
    h = space.cocycle(x.coords)
    if rng is not None:
        h += space.coboundary(rng)
    po = Pushout(space.iota, h)
    epi = po.induced(space.p, NatMap.zero(space.N, space.M))
    return SES(po.right, epi)


def equivalent(s: SES, t: SES) -> NatMap | None:
    """A middle map ``θ`` with ``θ ∘ s.mono = t.mono`` and ``t.epi ∘ θ = s.epi``, if any."""
    if s.a != t.a or s.c != t.c:
        return None
    eqs = nat_equations(s.b, t.b)
    field = s.field
    for i in s.cat.objects:
        eqs.add(
            [(i, Mat.identity(field, t.b.dim[i]), s.mono.comp[i])],
            t.mono.comp[i],
        )
        eqs.add(
            [(i, t.epi.comp[i], Mat.identity(field, s.b.dim[i]))],
            s.epi.comp[i],
        )
    sol = eqs.solve()
    return None if sol is None else NatMap(s.b, t.b, sol)


def _columns_of(space: ExtSpace, target: ExtSpace, transport: Callable[[SES], SES]) -> Mat:
    cols = [classify_ses(transport(realize_class(e)), target).coords for e in space.basis()]
    return Mat.from_columns(space.field, cols, target.dim)


def ext_pullback(space: ExtSpace, t: NatMap, target: ExtSpace) -> Mat:
    """``Ext¹(M, N) -> Ext¹(M', N)`` along ``t: M' -> M``."""
    if t.tgt != space.M or t.src != target.M or target.N != space.N:
        msg = "Pullback map does not connect the two Ext spaces"
        raise ShapeError(msg)
    return _columns_of(space, target, lambda s: pullback_ses(s, t))


def ext_pushout(space: ExtSpace, a: NatMap, target: ExtSpace) -> Mat:
    """``Ext¹(M, N) -> Ext¹(M, N')`` along ``a: N -> N'``."""
    if a.src != space.N or a.tgt != target.N or target.M != space.M:
        msg = "Pushout map does not connect the two Ext spaces"
        raise ShapeError(msg)
    return _columns_of(space, target, lambda s: pushout_ses(s, a))


def ext_dual(space: ExtSpace, target: ExtSpace) -> Mat:
    """``Ext¹(M, N) -> Ext¹(N*, M*)`` over the opposite category."""
    if target.M != dual(space.N) or target.N != dual(space.M):
        msg = "Target is not the dual Ext space"
        raise ShapeError(msg)
    return _columns_of(space, target, dual_ses)
