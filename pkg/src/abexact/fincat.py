"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from functools import cached_property, lru_cache
from typing import NamedTuple

import msgspec

from .errors import CategoryError, MalformedRelation, NonFinite

log = logging.getLogger(__name__)

__all__ = [
    "A2",
    "BC2",
    "COSPAN",
    "POINT",
    "SPAN",
    "Arrow",
    "CatPresentation",
    "FinCat",
    "Path",
    "Split",
    "compile_presentation",
    "diagram_cat",
    "discrete",
    "library_names",
    "one_point_extension",
    "opposite",
    "product",
    "shape",
    "split",
]

STAR = "*"
DEFAULT_CLOSURE_BOUND = 256


class Arrow(msgspec.Struct, frozen=True, gc=False):
    name: str
    src: str
    tgt: str


class Path(msgspec.Struct, frozen=True, gc=False):
    """Arrows listed in application order, starting at ``obj``. The empty path is the identity."""

    obj: str
    arrows: tuple[str, ...] = ()


class CatPresentation(msgspec.Struct, frozen=True, gc=False):
    name: str
    objects: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    relations: tuple[tuple[Path, Path], ...] = ()
    closure_bound: int = DEFAULT_CLOSURE_BOUND


class FinCat:
    """A finite category given by explicit tables.

    ``compose[(g, f)]`` is ``g∘f`` and is present exactly when ``tgt(f) == src(g)``.
    Instances are treated as immutable once built.
    """

    def __init__(
        self,
        name: str,
        objects: Iterable[str],
        morphisms: Iterable[Arrow],
        identity: Mapping[str, str],
        compose: Mapping[tuple[str, str], str],
        *,
        factors: tuple[FinCat, FinCat] | None = None,
        extends: FinCat | None = None,
        check: bool = True,
    ) -> None:
        self.name = name
        self.objects: tuple[str, ...] = tuple(objects)
        self.morphisms: tuple[Arrow, ...] = tuple(morphisms)
        self.arrow: dict[str, Arrow] = {m.name: m for m in self.morphisms}
        self.identity: dict[str, str] = dict(identity)
        self.compose: dict[tuple[str, str], str] = dict(compose)
        self.factors = factors
        self.extends = extends
        self._op: FinCat | None = None
        if check:
            self.validate()

    def __repr__(self) -> str:
        return f"<FinCat {self.name}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    @cached_property
    def _key(self) -> tuple[object, ...]:
        return (
            self.objects,
            self.morphisms,
            tuple(sorted(self.identity.items())),
            tuple(sorted(self.compose.items())),
        )

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinCat):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    # tables

    def src(self, m: str) -> str:
        return self.arrow[m].src

    def tgt(self, m: str) -> str:
        return self.arrow[m].tgt

    def comp(self, g: str, f: str) -> str:
        try:
            return self.compose[g, f]
        except KeyError:
            msg = f"{g} and {f} are not composable in {self.name}"
            raise CategoryError(msg) from None

    def is_identity(self, m: str) -> bool:
        a = self.arrow[m]
        return self.identity[a.src] == m

    @cached_property
    def _homs(self) -> dict[tuple[str, str], tuple[str, ...]]:
        homs: dict[tuple[str, str], list[str]] = {}
        for m in self.morphisms:
            homs.setdefault((m.src, m.tgt), []).append(m.name)
        return {k: tuple(v) for k, v in homs.items()}

    def hom(self, i: str, j: str) -> tuple[str, ...]:
        return self._homs.get((i, j), ())

    def out_of(self, i: str) -> tuple[str, ...]:
        return tuple(m.name for m in self.morphisms if m.src == i)

    @property
    def non_identities(self) -> tuple[Arrow, ...]:
        return tuple(m for m in self.morphisms if not self.is_identity(m.name))

    @property
    def is_discrete(self) -> bool:
        return len(self.morphisms) == len(self.objects)

    @property
    def is_point(self) -> bool:
        return len(self.objects) == 1 and len(self.morphisms) == 1

    def terminal(self) -> str | None:
        for t in self.objects:
            if all(len(self.hom(i, t)) == 1 for i in self.objects):
                return t
        return None

    def initial(self) -> str | None:
        for s in self.objects:
            if all(len(self.hom(s, j)) == 1 for j in self.objects):
                return s
        return None

    def validate(self) -> None:
        """Check every table invariant, exhaustively over composable triples."""
        if len(set(self.objects)) != len(self.objects):
            msg = f"Duplicate object ids in {self.name}"
            raise CategoryError(msg)
        if len(self.arrow) != len(self.morphisms):
            msg = f"Duplicate morphism ids in {self.name}"
            raise CategoryError(msg)
        objs = set(self.objects)
        for m in self.morphisms:
            if m.src not in objs or m.tgt not in objs:
                msg = f"Morphism {m.name} references an unknown object"
                raise CategoryError(msg)
        for i in self.objects:
            ident = self.identity.get(i)
            if ident is None or ident not in self.arrow or self.src(ident) != i or self.tgt(ident) != i:
                msg = f"Object {i} has no valid identity in {self.name}"
                raise CategoryError(msg)

        expected = {(g.name, f.name) for f in self.morphisms for g in self.morphisms if f.tgt == g.src}
        if set(self.compose) != expected:
            msg = f"Composition table of {self.name} is not defined exactly on composable pairs"
            raise CategoryError(msg)
        for (g, f), h in self.compose.items():
            if h not in self.arrow or self.src(h) != self.src(f) or self.tgt(h) != self.tgt(g):
                msg = f"{g}∘{f} = {h} has the wrong endpoints in {self.name}"
                raise CategoryError(msg)

        for m in self.morphisms:
            if self.compose[m.name, self.identity[m.src]] != m.name:
                msg = f"Right identity law fails for {m.name}"
                raise CategoryError(msg)
            if self.compose[self.identity[m.tgt], m.name] != m.name:
                msg = f"Left identity law fails for {m.name}"
                raise CategoryError(msg)

        for f in self.morphisms:
            for g in self.morphisms:
                if g.src != f.tgt:
                    continue
                gf = self.compose[g.name, f.name]
                for h in self.morphisms:
                    if h.src != g.tgt:
                        continue
                    if self.compose[h.name, gf] != self.compose[self.compose[h.name, g.name], f.name]:
                        msg = f"Associativity fails for {h.name}, {g.name}, {f.name} in {self.name}"
                        raise CategoryError(msg)

    # generators and words

    @cached_property
    def _words(self) -> tuple[tuple[str, ...], dict[str, tuple[str, ...]]]:
        """Greedy generating set in declaration order, with a shortest word per morphism."""
        gens: list[str] = []
        words: dict[str, tuple[str, ...]] = {}

        def close() -> None:
            words.clear()
            queue: deque[str] = deque()
            for i in self.objects:
                words[self.identity[i]] = ()
                queue.append(self.identity[i])
            while queue:
                m = queue.popleft()
                for g in gens:
                    if self.src(g) != self.tgt(m):
                        continue
                    gm = self.compose[g, m]
                    if gm not in words:
                        words[gm] = (*words[m], g)
                        queue.append(gm)

        close()
        for m in self.morphisms:
            if m.name not in words:
                gens.append(m.name)
                close()
        return tuple(gens), words

    @property
    def generators(self) -> tuple[str, ...]:
        return self._words[0]

    def word(self, m: str) -> tuple[str, ...]:
        """Generators of ``m`` in application order."""
        return self._words[1][m]

    def opposite(self) -> FinCat:
        if self._op is None:
            if self.factors is not None:
                op = product(self.factors[0].opposite(), self.factors[1].opposite())
            else:
                op = FinCat(
                    f"{self.name}^op",
                    self.objects,
                    (Arrow(m.name, m.tgt, m.src) for m in self.morphisms),
                    self.identity,
                    {(f, g): h for (g, f), h in self.compose.items()},
                    check=False,
                )
            op._op = self
            self._op = op
        return self._op


def opposite(c: FinCat) -> FinCat:
    return c.opposite()


def _check_path(arrows: Mapping[str, Arrow], path: Path) -> tuple[str, str]:
    here = path.obj
    for a in path.arrows:
        arrow = arrows.get(a)
        if arrow is None:
            msg = f"Relation uses unknown arrow {a}"
            raise MalformedRelation(msg)
        if arrow.src != here:
            msg = f"Relation path is not composable at {a}: expected source {here}, got {arrow.src}"
            raise MalformedRelation(msg)
        here = arrow.tgt
    return path.obj, here


def compile_presentation(p: CatPresentation) -> FinCat:
    """Enumerate the morphisms of a presented category by coset enumeration.

    Classes start at the identities. Each live class gets every outgoing arrow defined and
    every relation traced from it; coincidences are merged into the older class.
    """
    objs = set(p.objects)
    if len(objs) != len(p.objects):
        msg = f"Duplicate objects in presentation {p.name}"
        raise CategoryError(msg)
    arrows = {a.name: a for a in p.arrows}
    if len(arrows) != len(p.arrows):
        msg = f"Duplicate arrows in presentation {p.name}"
        raise CategoryError(msg)
    for a in p.arrows:
        if a.src not in objs or a.tgt not in objs:
            msg = f"Arrow {a.name} references an unknown object"
            raise CategoryError(msg)
        if a.name.startswith("id_"):
            msg = f"Arrow name {a.name} is reserved for identities"
            raise CategoryError(msg)
    if p.closure_bound < 1:
        msg = "closure bound must be positive"
        raise CategoryError(msg)

    rels_at: dict[str, list[tuple[Path, Path]]] = {}
    for lhs, rhs in p.relations:
        for side in (lhs, rhs):
            if side.obj not in objs:
                msg = f"Relation starts at unknown object {side.obj}"
                raise MalformedRelation(msg)
        if _check_path(arrows, lhs) != _check_path(arrows, rhs):
            msg = f"Relation sides are not parallel: {lhs.arrows} vs {rhs.arrows}"
            raise MalformedRelation(msg)
        rels_at.setdefault(lhs.obj, []).append((lhs, rhs))

    out_arrows: dict[str, list[Arrow]] = {o: [] for o in p.objects}
    for a in p.arrows:
        out_arrows[a.src].append(a)

    parent: list[int] = []
    src: list[str] = []
    tgt: list[str] = []
    words: list[tuple[str, ...]] = []
    table: list[dict[str, int]] = []
    live = 0
    max_defs = 64 * p.closure_bound

    def find(c: int) -> int:
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def new_class(s: str, t: str, word: tuple[str, ...]) -> int:
        nonlocal live
        parent.append(len(parent))
        src.append(s)
        tgt.append(t)
        words.append(word)
        table.append({})
        live += 1
        if live > p.closure_bound or len(parent) > max_defs:
            msg = (
                f"{p.name} did not close within {p.closure_bound} morphisms; "
                "the presented category is infinite or the bound is too small"
            )
            raise NonFinite(msg)
        return len(parent) - 1

    def follow(c: int, a: str) -> int:
        c = find(c)
        t = table[c].get(a)
        if t is None:
            t = new_class(src[c], arrows[a].tgt, (*words[c], a))
            table[c][a] = t
        return find(t)

    def trace(c: int, path: Path) -> int:
        for a in path.arrows:
            c = follow(c, a)
        return find(c)

    def merge(x: int, y: int) -> None:
        nonlocal live
        pending = [(x, y)]
        while pending:
            a, b = pending.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if b < a:
                a, b = b, a
            parent[b] = a
            live -= 1
            moved, table[b] = table[b], {}
            for arrow_name, t in moved.items():
                s = table[a].get(arrow_name)
                if s is None:
                    table[a][arrow_name] = t
                else:
                    pending.append((s, t))

    for o in p.objects:
        new_class(o, o, ())

    i = 0
    while i < len(parent):
        if find(i) == i:
            for a in out_arrows[tgt[i]]:
                follow(i, a.name)
            for lhs, rhs in rels_at.get(tgt[i], ()):
                left = trace(i, lhs)
                right = trace(find(i), rhs)
                merge(left, right)
        i += 1

    reps = [c for c in range(len(parent)) if find(c) == c]
    log.debug("Presentation %s closed with %d morphisms (%d definitions)", p.name, len(reps), len(parent))

    def name_of(c: int) -> str:
        w = words[c]
        return f"id_{src[c]}" if not w else ".".join(reversed(w))

    names = {c: name_of(c) for c in reps}
    morphisms = [Arrow(names[c], src[c], tgt[c]) for c in reps]
    identity = {o: f"id_{o}" for o in p.objects}
    compose: dict[tuple[str, str], str] = {}
    for f in reps:
        for g in reps:
            if src[g] != tgt[f]:
                continue
            c = f
            for a in words[g]:
                c = find(table[find(c)][a])
            compose[names[g], names[f]] = names[c]
    return FinCat(p.name, p.objects, morphisms, identity, compose)


def _quiver(
    name: str,
    objects: Sequence[str],
    arrows: Sequence[tuple[str, str, str]],
    relations: Sequence[tuple[Path, Path]] = (),
) -> FinCat:
    pres = CatPresentation(
        name,
        tuple(objects),
        tuple(Arrow(*a) for a in arrows),
        tuple(relations),
    )
    return compile_presentation(pres)


POINT = _quiver("Point", ["pt"], [])
A2 = _quiver("A2", ["1", "2"], [("a", "1", "2")])
SPAN = _quiver("Span", ["c", "a", "b"], [("p", "c", "a"), ("q", "c", "b")])
BC2 = _quiver("BC2", ["x"], [("g", "x", "x")], [(Path("x", ("g", "g")), Path("x"))])


@lru_cache(16)
def discrete(n: int) -> FinCat:
    return _quiver(f"Discrete{n}", [str(k) for k in range(1, n + 1)], [])


def _cospan() -> FinCat:
    op = SPAN.opposite()
    # same tables as the opposite of Span, under its own name
    c = FinCat("Cospan", op.objects, op.morphisms, op.identity, op.compose)
    c._op = SPAN
    return c


COSPAN = _cospan()

_LIBRARY: dict[str, FinCat] = {
    "point": POINT,
    "a2": A2,
    "span": SPAN,
    "cospan": COSPAN,
    "bc2": BC2,
}


def shape(name: str) -> FinCat:
    key = name.strip().lower()
    if key in _LIBRARY:
        return _LIBRARY[key]
    if key.startswith("discrete") and key[8:].isdigit():
        return discrete(int(key[8:]))
    msg = f"Unknown shape {name!r}"
    raise CategoryError(msg)


def library_names() -> tuple[str, ...]:
    return ("Point", "A2", "Span", "Cospan", "BC2", "Discrete1", "Discrete2", "Discrete3")


def one_point_extension(c: FinCat) -> FinCat:
    """Add a source object ``*`` with one arrow ``alpha_i: * -> i`` per object."""
    if STAR in c.objects:
        msg = f"{c.name} already has an object named {STAR}"
        raise CategoryError(msg)
    star_id = f"id_{STAR}"
    alphas = {i: f"alpha_{i}" for i in c.objects}
    taken = set(c.arrow)
    if star_id in taken or taken & set(alphas.values()):
        msg = f"{c.name} already uses the morphism names of its one-point extension"
        raise CategoryError(msg)

    morphisms = [
        Arrow(star_id, STAR, STAR),
        *(Arrow(alphas[i], STAR, i) for i in c.objects),
        *c.morphisms,
    ]
    identity = {STAR: star_id, **c.identity}
    compose = dict(c.compose)
    compose[star_id, star_id] = star_id
    for i in c.objects:
        compose[alphas[i], star_id] = alphas[i]
    for lam in c.morphisms:
        compose[lam.name, alphas[lam.src]] = alphas[lam.tgt]
    return FinCat(f"{c.name}*", (STAR, *c.objects), morphisms, identity, compose, extends=c)


@lru_cache(64)
def product(c: FinCat, d: FinCat) -> FinCat:
    objects = [f"{i}|{x}" for i in c.objects for x in d.objects]
    morphisms = [
        Arrow(f"{f.name}|{g.name}", f"{f.src}|{g.src}", f"{f.tgt}|{g.tgt}")
        for f in c.morphisms
        for g in d.morphisms
    ]
    identity = {f"{i}|{x}": f"{c.identity[i]}|{d.identity[x]}" for i in c.objects for x in d.objects}
    compose = {
        (f"{g1}|{g2}", f"{f1}|{f2}"): f"{h1}|{h2}"
        for (g1, f1), h1 in c.compose.items()
        for (g2, f2), h2 in d.compose.items()
    }
    return FinCat(f"{c.name}x{d.name}", objects, morphisms, identity, compose, factors=(c, d))


class Split(NamedTuple):
    """A flat category read as Σ x Δ: Σ-diagrams with values in Fun(Δ, Vect)."""

    sigma: FinCat
    delta: FinCat
    flat: FinCat

    @property
    def over_point(self) -> bool:
        return self.flat is self.sigma

    def obj(self, i: str, x: str) -> str:
        return i if self.over_point else f"{i}|{x}"

    def mor(self, lam: str, beta: str) -> str:
        return lam if self.over_point else f"{lam}|{beta}"

    def opposite(self) -> Split:
        return split(self.sigma.opposite(), self.delta.opposite())


def diagram_cat(sigma: FinCat, delta: FinCat) -> FinCat:
    return sigma if delta == POINT else product(sigma, delta)


def split(sigma: FinCat, delta: FinCat | None = None) -> Split:
    delta = POINT if delta is None else delta
    return Split(sigma, POINT if delta == POINT else delta, diagram_cat(sigma, delta))
