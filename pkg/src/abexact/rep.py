"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from typing import NamedTuple, Self

import msgspec

from .errors import NotACocone, NotACone, RepError, ShapeError, UniversalPropertyError
from .exactfield import Field, Mat, MatrixEquations, Scalar, cokernel, kernel, left_solve, solve
from .fincat import FinCat, Split

log = logging.getLogger(__name__)

__all__ = [
    "SES",
    "Curried",
    "DirectSum",
    "NatMap",
    "Pullback",
    "Pushout",
    "Rep",
    "ValidationReport",
    "coker_nat",
    "curry",
    "direct_sum",
    "direct_sum_many",
    "image_nat",
    "kappa",
    "kappa_map",
    "kappa_over",
    "kappa_over_map",
    "ker_nat",
    "nat_equations",
    "pullback_nat",
    "pushout_nat",
    "restrict",
    "restrict_map",
    "restrict_ses",
    "sum_of",
    "uncurry",
]


class ValidationReport(msgspec.Struct, frozen=True, gc=False):
    ok: bool
    violations: tuple[str, ...] = ()


class Rep:
    """A functor from ``cat`` to finite-dimensional vector spaces over ``field``.

    ``action[m]`` has ``dim[tgt m]`` rows and ``dim[src m]`` columns.
    """

    __slots__ = ("action", "cat", "dim", "field")

    def __init__(
        self,
        cat: FinCat,
        field: Field,
        dim: Mapping[str, int],
        action: Mapping[str, Mat],
        *,
        check: bool = True,
    ) -> None:
        self.cat = cat
        self.field = field
        self.dim: dict[str, int] = {i: dim[i] for i in cat.objects}
        self.action: dict[str, Mat] = {}
        for m in cat.morphisms:
            mat = action.get(m.name)
            if mat is None:
                msg = f"No matrix for morphism {m.name}"
                raise RepError(msg, [msg])
            mat.check_field(field)
            if mat.shape != (self.dim[m.tgt], self.dim[m.src]):
                msg = (
                    f"Matrix for {m.name} has shape {mat.rows}x{mat.cols}, "
                    f"expected {self.dim[m.tgt]}x{self.dim[m.src]}"
                )
                raise RepError(msg, [msg])
            self.action[m.name] = mat
        if any(d < 0 for d in self.dim.values()):
            msg = "Dimensions must be nonnegative"
            raise RepError(msg, [msg])
        if check:
            report = self.validate()
            if not report.ok:
                msg = f"Not a functor on {cat.name}: {report.violations[0]}"
                raise RepError(msg, list(report.violations))

    @classmethod
    def from_generators(
        cls,
        cat: FinCat,
        field: Field,
        dim: Mapping[str, int],
        gens: Mapping[str, Mat],
        *,
        check: bool = True,
    ) -> Self:
        """Extend matrices on the generators of ``cat`` along words. Missing generators act by zero."""
        gen_mats = {
            g: gens[g] if g in gens else Mat.zeros(field, dim[cat.tgt(g)], dim[cat.src(g)])
            for g in cat.generators
        }
        action: dict[str, Mat] = {}
        for m in cat.morphisms:
            mat = Mat.identity(field, dim[m.src])
            for g in cat.word(m.name):
                mat = gen_mats[g] @ mat
            action[m.name] = mat
        return cls(cat, field, dim, action, check=check)

    @classmethod
    def zero(cls, cat: FinCat, field: Field) -> Self:
        return cls(
            cat,
            field,
            dict.fromkeys(cat.objects, 0),
            {m.name: Mat.zeros(field, 0, 0) for m in cat.morphisms},
            check=False,
        )

    def validate(self) -> ValidationReport:
        violations: list[str] = []
        for i in self.cat.objects:
            if self.action[self.cat.identity[i]] != Mat.identity(self.field, self.dim[i]):
                violations.append(f"F({self.cat.identity[i]}) is not the identity")
        for (g, f), h in self.cat.compose.items():
            if self.cat.is_identity(g) or self.cat.is_identity(f):
                continue
            if self.action[g] @ self.action[f] != self.action[h]:
                violations.append(f"F({g})·F({f}) != F({h}) although {g}∘{f} = {h}")
        return ValidationReport(not violations, tuple(violations))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Rep):
            return NotImplemented
        return (
            self.field == other.field
            and self.cat == other.cat
            and self.dim == other.dim
            and self.action == other.action
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        dims = ", ".join(f"{i}:{d}" for i, d in self.dim.items())
        return f"<Rep over {self.cat.name}/{self.field.name} dims ({dims})>"

    @property
    def total_dim(self) -> int:
        return sum(self.dim.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0


class NatMap:
    """A natural transformation ``src -> tgt``, one matrix per object."""

    __slots__ = ("comp", "src", "tgt")

    def __init__(self, src: Rep, tgt: Rep, comp: Mapping[str, Mat], *, check: bool = True) -> None:
        if src.cat != tgt.cat or src.field != tgt.field:
            msg = "Natural maps need representations of one category over one field"
            raise RepError(msg, [msg])
        self.src = src
        self.tgt = tgt
        self.comp: dict[str, Mat] = {}
        for i in src.cat.objects:
            m = comp[i]
            if m.shape != (tgt.dim[i], src.dim[i]):
                msg = f"Component at {i} has shape {m.shape}, expected {(tgt.dim[i], src.dim[i])}"
                raise RepError(msg, [msg])
            self.comp[i] = m
        if check:
            violations = self.naturality_violations()
            if violations:
                msg = f"Not natural: {violations[0]}"
                raise RepError(msg, violations)

    def naturality_violations(self) -> list[str]:
        out: list[str] = []
        for lam in self.cat.non_identities:
            lhs = self.tgt.action[lam.name] @ self.comp[lam.src]
            rhs = self.comp[lam.tgt] @ self.src.action[lam.name]
            if lhs != rhs:
                out.append(f"square at {lam.name}: {lam.src} -> {lam.tgt} does not commute")
        return out

    @property
    def cat(self) -> FinCat:
        return self.src.cat

    @property
    def field(self) -> Field:
        return self.src.field

    def __repr__(self) -> str:
        return f"<NatMap {self.src!r} -> {self.tgt!r}>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NatMap):
            return NotImplemented
        return self.src == other.src and self.tgt == other.tgt and self.comp == other.comp

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def zero(cls, src: Rep, tgt: Rep) -> Self:
        comp = {i: Mat.zeros(src.field, tgt.dim[i], src.dim[i]) for i in src.cat.objects}
        return cls(src, tgt, comp, check=False)

    @classmethod
    def identity(cls, rep: Rep) -> Self:
        comp = {i: Mat.identity(rep.field, rep.dim[i]) for i in rep.cat.objects}
        return cls(rep, rep, comp, check=False)

    def __matmul__(self, other: NatMap) -> NatMap:
        """``self ∘ other``."""
        if other.tgt != self.src:
            msg = "Natural maps are not composable"
            raise ShapeError(msg)
        return NatMap(other.src, self.tgt, {i: self.comp[i] @ other.comp[i] for i in self.comp})

    def _same_ends(self, other: NatMap) -> None:
        if self.src != other.src or self.tgt != other.tgt:
            msg = "Natural maps have different endpoints"
            raise ShapeError(msg)

    def __add__(self, other: NatMap) -> NatMap:
        self._same_ends(other)
        return NatMap(self.src, self.tgt, {i: self.comp[i] + other.comp[i] for i in self.comp})

    def __sub__(self, other: NatMap) -> NatMap:
        self._same_ends(other)
        return NatMap(self.src, self.tgt, {i: self.comp[i] - other.comp[i] for i in self.comp})

    def __neg__(self) -> NatMap:
        return NatMap(self.src, self.tgt, {i: -m for i, m in self.comp.items()}, check=False)

    def scale(self, s: Scalar) -> NatMap:
        return NatMap(self.src, self.tgt, {i: m.scale(s) for i, m in self.comp.items()}, check=False)

    def flatten(self) -> tuple[Scalar, ...]:
        return tuple(v for i in self.cat.objects for v in self.comp[i].flatten())

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.comp.values())

    def is_mono(self) -> bool:
        return all(m.is_injective() for m in self.comp.values())

    def is_epi(self) -> bool:
        return all(m.is_surjective() for m in self.comp.values())

    def is_iso(self) -> bool:
        return all(m.is_invertible() for m in self.comp.values())

    def inverse(self) -> NatMap:
        return NatMap(self.tgt, self.src, {i: m.inverse() for i, m in self.comp.items()})


def nat_equations(src: Rep, tgt: Rep) -> MatrixEquations[str]:
    """Unknown components ``X_i: src(i) -> tgt(i)`` constrained to be natural.

    Naturality is imposed on generators only, which is enough for functorial actions.
    """
    eqs = MatrixEquations(
        src.field, ((i, (tgt.dim[i], src.dim[i])) for i in src.cat.objects)
    )
    field = src.field
    for g in src.cat.generators:
        i, j = src.cat.src(g), src.cat.tgt(g)
        eqs.add(
            [
                (i, tgt.action[g], Mat.identity(field, src.dim[i])),
                (j, -Mat.identity(field, tgt.dim[j]), src.action[g]),
            ],
            Mat.zeros(field, tgt.dim[j], src.dim[i]),
        )
    return eqs


class SES:
    """``mono: A -> B`` followed by ``epi: B -> C``, exact at every object."""

    __slots__ = ("epi", "mono")

    def __init__(self, mono: NatMap, epi: NatMap) -> None:
        if mono.tgt != epi.src:
            msg = "The middle terms of the sequence do not agree"
            raise RepError(msg, [msg])
        violations: list[str] = []
        for i in mono.cat.objects:
            a, b = mono.comp[i], epi.comp[i]
            if not a.is_injective():
                violations.append(f"first map is not injective at {i}")
            if not b.is_surjective():
                violations.append(f"second map is not surjective at {i}")
            if not (b @ a).is_zero():
                violations.append(f"composite is not zero at {i}")
            if mono.tgt.dim[i] != mono.src.dim[i] + epi.tgt.dim[i]:
                violations.append(f"dimensions do not add up at {i}")
        if violations:
            msg = f"Not a short exact sequence: {violations[0]}"
            raise RepError(msg, violations)
        self.mono = mono
        self.epi = epi

    def __repr__(self) -> str:
        return f"<SES {self.a!r} -> {self.b!r} -> {self.c!r}>"

    @property
    def a(self) -> Rep:
        return self.mono.src

    @property
    def b(self) -> Rep:
        return self.mono.tgt

    @property
    def c(self) -> Rep:
        return self.epi.tgt

    @property
    def cat(self) -> FinCat:
        return self.mono.cat

    @property
    def field(self) -> Field:
        return self.mono.field

    def section(self) -> NatMap | None:
        """A natural ``s: C -> B`` with ``epi ∘ s = 1``, if the sequence splits."""
        eqs = nat_equations(self.c, self.b)
        for i in self.cat.objects:
            eqs.add(
                [(i, self.epi.comp[i], Mat.identity(self.field, self.c.dim[i]))],
                Mat.identity(self.field, self.c.dim[i]),
            )
        sol = eqs.solve()
        return None if sol is None else NatMap(self.c, self.b, sol)

    def is_split(self) -> bool:
        return self.section() is not None


class DirectSum(NamedTuple):
    rep: Rep
    inj: tuple[NatMap, ...]
    proj: tuple[NatMap, ...]


def direct_sum_many(reps: Sequence[Rep]) -> DirectSum:
    """Block-order direct sum of ``reps`` with its injections and projections."""
    if not reps:
        msg = "Direct sum of nothing needs a category"
        raise ShapeError(msg)
    cat, field = reps[0].cat, reps[0].field
    dim = {i: sum(r.dim[i] for r in reps) for i in cat.objects}
    action = {m.name: Mat.block_diag(field, [r.action[m.name] for r in reps]) for m in cat.morphisms}
    total = Rep(cat, field, dim, action, check=False)
    inj: list[NatMap] = []
    proj: list[NatMap] = []
    offsets = dict.fromkeys(cat.objects, 0)
    for r in reps:
        inj_comp: dict[str, Mat] = {}
        proj_comp: dict[str, Mat] = {}
        for i in cat.objects:
            ident = Mat.identity(field, dim[i])
            block = ident.columns(offsets[i], offsets[i] + r.dim[i])
            inj_comp[i] = block
            proj_comp[i] = block.T
            offsets[i] += r.dim[i]
        inj.append(NatMap(r, total, inj_comp))
        proj.append(NatMap(total, r, proj_comp))
    return DirectSum(total, tuple(inj), tuple(proj))


def direct_sum(left: Rep, right: Rep) -> DirectSum:
    return direct_sum_many([left, right])


def ker_nat(phi: NatMap) -> tuple[Rep, NatMap]:
    """Pointwise kernel with its inclusion."""
    src, field = phi.src, phi.field
    basis = {i: kernel(phi.comp[i]) for i in phi.cat.objects}
    action: dict[str, Mat] = {}
    for m in phi.cat.morphisms:
        x = solve(basis[m.tgt], src.action[m.name] @ basis[m.src])
        if x is None:
            msg = f"Kernel is not stable under {m.name}; the input map is not natural"
            raise UniversalPropertyError(msg)
        action[m.name] = x
    k = Rep(phi.cat, field, {i: b.cols for i, b in basis.items()}, action)
    return k, NatMap(k, src, basis)


def coker_nat(phi: NatMap) -> tuple[Rep, NatMap]:
    """Pointwise cokernel with its projection."""
    tgt, field = phi.tgt, phi.field
    quot = {i: cokernel(phi.comp[i]) for i in phi.cat.objects}
    action: dict[str, Mat] = {}
    for m in phi.cat.morphisms:
        x = left_solve(quot[m.src], quot[m.tgt] @ tgt.action[m.name])
        if x is None:
            msg = f"Cokernel action at {m.name} does not factor; the input map is not natural"
            raise UniversalPropertyError(msg)
        action[m.name] = x
    c = Rep(phi.cat, field, {i: q.rows for i, q in quot.items()}, action)
    return c, NatMap(tgt, c, quot)


def image_nat(phi: NatMap) -> tuple[Rep, NatMap, NatMap]:
    """``phi = mono ∘ epi`` through the pointwise image."""
    tgt, field = phi.tgt, phi.field
    basis = {i: phi.comp[i].column_basis() for i in phi.cat.objects}
    action: dict[str, Mat] = {}
    coeffs: dict[str, Mat] = {}
    for m in phi.cat.morphisms:
        x = solve(basis[m.tgt], tgt.action[m.name] @ basis[m.src])
        assert x is not None, "images of natural maps are subrepresentations"
        action[m.name] = x
    for i in phi.cat.objects:
        x = solve(basis[i], phi.comp[i])
        assert x is not None
        coeffs[i] = x
    im = Rep(phi.cat, field, {i: b.cols for i, b in basis.items()}, action)
    return im, NatMap(phi.src, im, coeffs), NatMap(im, tgt, basis)


class Pushout:
    """Pushout of ``f: X -> Y`` and ``g: X -> Z``, the cokernel of ``(f, -g)`` into ``Y ⊕ Z``."""

    __slots__ = ("f", "g", "left", "quotient", "rep", "right")

    def __init__(self, f: NatMap, g: NatMap) -> None:
        if f.src != g.src:
            msg = "Pushout legs need a common source"
            raise ShapeError(msg)
        total = direct_sum(f.tgt, g.tgt)
        diff = total.inj[0] @ f - total.inj[1] @ g
        self.f, self.g = f, g
        self.rep, self.quotient = coker_nat(diff)
        self.left = self.quotient @ total.inj[0]
        self.right = self.quotient @ total.inj[1]

    def induced(self, u: NatMap, v: NatMap) -> NatMap:
        """The unique ``m`` with ``m ∘ left = u`` and ``m ∘ right = v``."""
        if u.tgt != v.tgt or u.src != self.f.tgt or v.src != self.g.tgt:
            msg = "Cocone legs do not match the pushout"
            raise ShapeError(msg)
        if u @ self.f != v @ self.g:
            msg = "u ∘ f != v ∘ g, so (u, v) is not a cocone"
            raise NotACocone(msg)
        field = u.field
        comp: dict[str, Mat] = {}
        for i in u.cat.objects:
            legs = Mat.hstack(field, [u.comp[i], v.comp[i]], u.tgt.dim[i])
            m = left_solve(self.quotient.comp[i], legs)
            if m is None:
                msg = f"Pushout mediating map does not exist at {i}"
                log.error("%s", msg)
                raise UniversalPropertyError(msg)
            comp[i] = m
        # quotient maps are surjective, so the solution is unique
        return NatMap(self.rep, u.tgt, comp)


class Pullback:
    """Pullback of ``f: Y -> X`` and ``g: Z -> X``, the kernel of ``(f, -g)`` out of ``Y ⊕ Z``."""

    __slots__ = ("f", "g", "inclusion", "left", "rep", "right")

    def __init__(self, f: NatMap, g: NatMap) -> None:
        if f.tgt != g.tgt:
            msg = "Pullback legs need a common target"
            raise ShapeError(msg)
        total = direct_sum(f.src, g.src)
        diff = f @ total.proj[0] - g @ total.proj[1]
        self.f, self.g = f, g
        self.rep, self.inclusion = ker_nat(diff)
        self.left = total.proj[0] @ self.inclusion
        self.right = total.proj[1] @ self.inclusion

    def induced(self, u: NatMap, v: NatMap) -> NatMap:
        """The unique ``m`` with ``left ∘ m = u`` and ``right ∘ m = v``."""
        if u.src != v.src or u.tgt != self.f.src or v.tgt != self.g.src:
            msg = "Cone legs do not match the pullback"
            raise ShapeError(msg)
        if self.f @ u != self.g @ v:
            msg = "f ∘ u != g ∘ v, so (u, v) is not a cone"
            raise NotACone(msg)
        field = u.field
        comp: dict[str, Mat] = {}
        for i in u.cat.objects:
            legs = Mat.vstack(field, [u.comp[i], v.comp[i]], u.src.dim[i])
            m = solve(self.inclusion.comp[i], legs)
            if m is None:
                msg = f"Pullback mediating map does not exist at {i}"
                log.error("%s", msg)
                raise UniversalPropertyError(msg)
            comp[i] = m
        return NatMap(u.src, self.rep, comp)


def pushout_nat(f: NatMap, g: NatMap) -> Pushout:
    return Pushout(f, g)


def pullback_nat(f: NatMap, g: NatMap) -> Pullback:
    return Pullback(f, g)


# constant diagrams


def kappa(c: FinCat, dim: int, field: Field) -> Rep:
    ident = Mat.identity(field, dim)
    return Rep(c, field, dict.fromkeys(c.objects, dim), {m.name: ident for m in c.morphisms}, check=False)


def kappa_map(c: FinCat, f: Mat) -> NatMap:
    src = kappa(c, f.cols, f.field)
    tgt = kappa(c, f.rows, f.field)
    return NatMap(src, tgt, dict.fromkeys(c.objects, f))


def kappa_over(sp: Split, a: Rep) -> Rep:
    """The constant Σ-diagram with value ``a``, a representation over Δ."""
    if a.cat != sp.delta:
        msg = f"{a!r} is not a representation over {sp.delta.name}"
        raise ShapeError(msg)
    dim = {sp.obj(i, x): a.dim[x] for i in sp.sigma.objects for x in sp.delta.objects}
    action = {
        sp.mor(lam.name, beta.name): a.action[beta.name]
        for lam in sp.sigma.morphisms
        for beta in sp.delta.morphisms
    }
    return Rep(sp.flat, a.field, dim, action, check=False)


def kappa_over_map(sp: Split, phi: NatMap) -> NatMap:
    comp = {sp.obj(i, x): phi.comp[x] for i in sp.sigma.objects for x in sp.delta.objects}
    return NatMap(kappa_over(sp, phi.src), kappa_over(sp, phi.tgt), comp)


# evaluation at an object of Σ


def restrict(f: Rep, sp: Split, i: str) -> Rep:
    ident = sp.sigma.identity[i]
    dim = {x: f.dim[sp.obj(i, x)] for x in sp.delta.objects}
    action = {beta.name: f.action[sp.mor(ident, beta.name)] for beta in sp.delta.morphisms}
    return Rep(sp.delta, f.field, dim, action, check=False)


def restrict_map(phi: NatMap, sp: Split, i: str) -> NatMap:
    return NatMap(
        restrict(phi.src, sp, i),
        restrict(phi.tgt, sp, i),
        {x: phi.comp[sp.obj(i, x)] for x in sp.delta.objects},
    )


def restrict_ses(s: SES, sp: Split, i: str) -> SES:
    return SES(restrict_map(s.mono, sp, i), restrict_map(s.epi, sp, i))


class Curried(NamedTuple):
    split: Split
    family: dict[str, Rep]
    maps: dict[str, NatMap]


def curry(f: Rep, sp: Split) -> Curried:
    """Read a representation over Σ x Δ as a Σ-diagram of representations over Δ."""
    if f.cat != sp.flat:
        msg = f"{f!r} does not live over {sp.flat.name}"
        raise ShapeError(msg)
    family = {i: restrict(f, sp, i) for i in sp.sigma.objects}
    maps: dict[str, NatMap] = {}
    for lam in sp.sigma.morphisms:
        comp = {
            x: f.action[sp.mor(lam.name, sp.delta.identity[x])] for x in sp.delta.objects
        }
        maps[lam.name] = NatMap(family[lam.src], family[lam.tgt], comp)
    return Curried(sp, family, maps)


def uncurry(sp: Split, family: Mapping[str, Rep], maps: Mapping[str, NatMap]) -> Rep:
    field = next(iter(family.values())).field if family else None
    if field is None:
        msg = "Cannot uncurry an empty family"
        raise ShapeError(msg)
    missing = [i for i in sp.sigma.objects if i not in family]
    missing += [lam.name for lam in sp.sigma.morphisms if lam.name not in maps]
    if missing:
        msg = f"Cannot uncurry over {sp.sigma.name}: nothing given for {', '.join(missing)}"
        raise ShapeError(msg)
    dim = {sp.obj(i, x): family[i].dim[x] for i in sp.sigma.objects for x in sp.delta.objects}
    action: dict[str, Mat] = {}
    for lam in sp.sigma.morphisms:
        if maps[lam.name].src != family[lam.src] or maps[lam.name].tgt != family[lam.tgt]:
            msg = f"Connecting map for {lam.name} has the wrong endpoints"
            raise ShapeError(msg)
        for beta in sp.delta.morphisms:
            action[sp.mor(lam.name, beta.name)] = (
                maps[lam.name].comp[beta.tgt] @ family[lam.src].action[beta.name]
            )
    return Rep(sp.flat, field, dim, action)


def sum_of(maps: Iterable[NatMap], src: Rep, tgt: Rep) -> NatMap:
    total = NatMap.zero(src, tgt)
    for m in maps:
        total += m
    return total
