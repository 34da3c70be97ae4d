"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors

A small text format for categories, representations, natural maps and sequences::

    category Span {
        objects: c, a, b;
        arrows: p: c -> a, q: c -> b;
    }
    functor F over Span field Q {
        dim c = 2; dim a = 1; dim b = 1;
        map p = [[1, 0]];
        map q = [[0, 1]];
    }
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterator, Mapping
from typing import Literal, NamedTuple

import msgspec

from .errors import AbexactError, DSLSemanticError, DSLSyntaxError, UnknownName
from .exactfield import Field, Mat
from .fincat import (
    DEFAULT_CLOSURE_BOUND,
    Arrow,
    CatPresentation,
    FinCat,
    Path,
    compile_presentation,
    one_point_extension,
    product,
    shape,
)
from .rep import SES, NatMap, Rep

log = logging.getLogger(__name__)

__all__ = ["DerivedCat", "Workspace", "dumps", "parse"]


_TOKEN_RE = re.compile(
    r"(?P<nl>\n)"
    r"|(?P<ws>[ \t\r]+)"
    r"|(?P<comment>#[^\n]*)"
    r"|(?P<arrow>->)"
    r"|(?P<word>-?[A-Za-z0-9_*'|./]+)"
    r"|(?P<punct>[{}()\[\]:;,=])"
)
_NUMBER_RE = re.compile(r"-?\d+(?:/\d+)?")


class Token(NamedTuple):
    kind: Literal["word", "punct", "arrow", "eof"]
    text: str
    line: int
    column: int


def tokenize(source: str) -> Iterator[Token]:
    line, col, pos = 1, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            msg = f"Unexpected character {source[pos]!r}"
            raise DSLSyntaxError(msg, line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind in {"word", "punct", "arrow"}:
                yield Token(kind, text, line, col)  # pyright: ignore[reportArgumentType]
            col += len(text)
        pos = m.end()
    yield Token("eof", "", line, col)


class DerivedCat(msgspec.Struct, frozen=True, gc=False):
    kind: Literal["product", "opposite", "star"]
    args: tuple[str, ...]


type CatDef = CatPresentation | DerivedCat


class FunctorDef(msgspec.Struct, frozen=True, gc=False):
    cat: str


class NatMapDef(msgspec.Struct, frozen=True, gc=False):
    src: str
    tgt: str


class SESDef(msgspec.Struct, frozen=True, gc=False):
    mono: str
    epi: str


type Kind = Literal["category", "functor", "natmap", "ses"]


class Workspace:
    """Parsed objects by name, one namespace per kind. Library shapes are always visible."""

    __slots__ = (
        "cat_defs",
        "categories",
        "functor_defs",
        "functors",
        "natmap_defs",
        "natmaps",
        "order",
        "ses_defs",
        "sequences",
    )

    def __init__(self) -> None:
        self.categories: dict[str, FinCat] = {}
        self.functors: dict[str, Rep] = {}
        self.natmaps: dict[str, NatMap] = {}
        self.sequences: dict[str, SES] = {}
        self.cat_defs: dict[str, CatDef] = {}
        self.functor_defs: dict[str, FunctorDef] = {}
        self.natmap_defs: dict[str, NatMapDef] = {}
        self.ses_defs: dict[str, SESDef] = {}
        self.order: list[tuple[Kind, str]] = []

    def __repr__(self) -> str:
        return (
            f"<Workspace {len(self.categories)} categories, {len(self.functors)} functors, "
            f"{len(self.natmaps)} natmaps, {len(self.sequences)} sequences>"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Workspace):
            return NotImplemented
        return (
            self.categories == other.categories
            and self.functors == other.functors
            and self.natmaps == other.natmaps
            and {k: (s.mono, s.epi) for k, s in self.sequences.items()}
            == {k: (s.mono, s.epi) for k, s in other.sequences.items()}
        )

    __hash__ = None  # type: ignore[assignment]

    def category(self, name: str) -> FinCat:
        if name in self.categories:
            return self.categories[name]
        try:
            return shape(name)
        except AbexactError:
            msg = f"No category named {name!r}"
            raise UnknownName(msg) from None

    def functor(self, name: str) -> Rep:
        try:
            return self.functors[name]
        except KeyError:
            msg = f"No functor named {name!r}"
            raise UnknownName(msg) from None

    def natmap(self, name: str) -> NatMap:
        try:
            return self.natmaps[name]
        except KeyError:
            msg = f"No natmap named {name!r}"
            raise UnknownName(msg) from None

    def ses(self, name: str) -> SES:
        try:
            return self.sequences[name]
        except KeyError:
            msg = f"No sequence named {name!r}"
            raise UnknownName(msg) from None


class _Parser:
    def __init__(self, source: str, ws: Workspace, closure_bound: int = DEFAULT_CLOSURE_BOUND) -> None:
        self.tokens = list(tokenize(source))
        self.pos = 0
        self.ws = ws
        self.closure_bound = closure_bound

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def _fail(self, msg: str, tok: Token | None = None) -> DSLSyntaxError:
        tok = self.tok if tok is None else tok
        return DSLSyntaxError(msg, tok.line, tok.column)

    def _semantic(self, msg: str, tok: Token) -> DSLSemanticError:
        return DSLSemanticError(f"{msg} (line {tok.line}, column {tok.column})")

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.tok.kind != "eof" and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if tok.text != text or tok.kind == "eof":
            found = tok.text or "end of input"
            raise self._fail(f"Expected {text!r}, found {found!r}")
        return self.advance()

    def name(self) -> Token:
        tok = self.tok
        if tok.kind != "word" or _NUMBER_RE.fullmatch(tok.text) and tok.text.startswith("-"):
            found = tok.text or "end of input"
            raise self._fail(f"Expected a name, found {found!r}")
        return self.advance()

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "word" or not tok.text.isdigit():
            raise self._fail(f"Expected a nonnegative integer, found {tok.text!r}")
        self.advance()
        return int(tok.text)

    def names(self, stop: str = ";") -> list[Token]:
        out = [self.name()]
        while self.accept(","):
            out.append(self.name())
        self.expect(stop)
        return out

    def matrix(self) -> list[list[str]] | None:
        """``[[1, 0], [0, 1]]``; ``[]`` is returned as ``None``."""
        self.expect("[")
        if self.accept("]"):
            return None
        rows: list[list[str]] = []
        while True:
            self.expect("[")
            row: list[str] = []
            if not self.accept("]"):
                while True:
                    tok = self.tok
                    if tok.kind != "word" or not _NUMBER_RE.fullmatch(tok.text):
                        raise self._fail(f"Expected a number, found {tok.text!r}")
                    row.append(self.advance().text)
                    if self.accept("]"):
                        break
                    self.expect(",")
            rows.append(row)
            if self.accept("]"):
                return rows
            self.expect(",")

    def _register(self, kind: Kind, name: Token, table: Mapping[str, object]) -> None:
        if name.text in table:
            raise self._semantic(f"{kind} {name.text!r} is already defined", name)

    # grammar

    def parse(self) -> Workspace:
        while self.tok.kind != "eof":
            tok = self.tok
            match tok.text:
                case "category":
                    self.category()
                case "functor":
                    self.functor()
                case "natmap":
                    self.natmap()
                case "ses":
                    self.sequence()
                case _:
                    raise self._fail(f"Expected a definition, found {tok.text!r}")
        return self.ws

    def category(self) -> None:
        self.expect("category")
        name = self.name()
        self._register("category", name, self.ws.categories)
        if self.accept("="):
            kind_tok = self.name()
            if kind_tok.text not in {"product", "opposite", "star"}:
                raise self._fail(f"Unknown category construction {kind_tok.text!r}", kind_tok)
            self.expect("(")
            args = self.names(")")
            self.expect(";")
            arity = 2 if kind_tok.text == "product" else 1
            if len(args) != arity:
                raise self._semantic(f"{kind_tok.text} takes {arity} argument(s)", kind_tok)
            d = DerivedCat(kind_tok.text, tuple(a.text for a in args))  # pyright: ignore[reportArgumentType]
            cat = self._derive(d, kind_tok)
            self._store_category(name.text, cat, d)
            return

        self.expect("{")
        objects: list[str] = []
        arrows: list[Arrow] = []
        relations: list[tuple[Path, Path]] = []
        bound = self.closure_bound
        while not self.accept("}"):
            section = self.name()
            self.expect(":")
            match section.text:
                case "objects":
                    objects.extend(t.text for t in self.names())
                case "arrows":
                    arrows.extend(self._arrows())
                case "relations":
                    relations.extend(self._relations({a.name: a for a in arrows}))
                case "bound":
                    bound = self.integer()
                    self.expect(";")
                case _:
                    raise self._fail(f"Unknown category section {section.text!r}", section)
        pres = CatPresentation(name.text, tuple(objects), tuple(arrows), tuple(relations), bound)
        try:
            cat = compile_presentation(pres)
        except AbexactError as exc:
            raise self._semantic(f"category {name.text}: {exc.msg}", name) from exc
        self._store_category(name.text, cat, pres)

    def _store_category(self, name: str, cat: FinCat, d: CatDef) -> None:
        self.ws.categories[name] = cat
        self.ws.cat_defs[name] = d
        self.ws.order.append(("category", name))
        log.debug("registered category %s", name)

    def _derive(self, d: DerivedCat, tok: Token) -> FinCat:
        try:
            cats = [self.ws.category(a) for a in d.args]
            match d.kind:
                case "product":
                    return product(cats[0], cats[1])
                case "opposite":
                    return cats[0].opposite()
                case "star":
                    return one_point_extension(cats[0])
        except AbexactError as exc:
            raise self._semantic(exc.msg or "bad category", tok) from exc

    def _arrows(self) -> list[Arrow]:
        out: list[Arrow] = []
        while True:
            name = self.name()
            if "." in name.text or name.text.startswith("id_"):
                raise self._semantic(f"arrow name {name.text!r} is reserved", name)
            self.expect(":")
            src = self.name()
            self.expect("->")
            tgt = self.name()
            out.append(Arrow(name.text, src.text, tgt.text))
            if self.accept(";"):
                return out
            self.expect(",")

    def _path(self, arrows: dict[str, Arrow]) -> Path:
        tok = self.name()
        if tok.text.startswith("id_"):
            return Path(tok.text[3:])
        applied = tuple(reversed(tok.text.split(".")))
        first = arrows.get(applied[0])
        if first is None:
            raise self._semantic(f"unknown arrow {applied[0]!r} in relation", tok)
        return Path(first.src, applied)

    def _relations(self, arrows: dict[str, Arrow]) -> list[tuple[Path, Path]]:
        out: list[tuple[Path, Path]] = []
        while True:
            lhs = self._path(arrows)
            self.expect("=")
            rhs = self._path(arrows)
            out.append((lhs, rhs))
            if self.accept(";"):
                return out
            self.expect(",")

    def functor(self) -> None:
        self.expect("functor")
        name = self.name()
        self._register("functor", name, self.ws.functors)
        self.expect("over")
        cat_tok = self.name()
        try:
            cat = self.ws.category(cat_tok.text)
        except UnknownName as exc:
            raise self._semantic(exc.msg or "unknown category", cat_tok) from exc
        self.expect("field")
        field_tok = self.name()
        try:
            field = Field.parse(field_tok.text)
        except AbexactError as exc:
            raise self._semantic(exc.msg or "unknown field", field_tok) from exc
        self.expect("{")
        dim: dict[str, int] = dict.fromkeys(cat.objects, 0)
        maps: dict[str, tuple[Token, list[list[str]] | None]] = {}
        while not self.accept("}"):
            kw = self.name()
            target = self.name()
            self.expect("=")
            if kw.text == "dim":
                if target.text not in dim:
                    raise self._semantic(f"{cat_tok.text} has no object {target.text!r}", target)
                dim[target.text] = self.integer()
            elif kw.text == "map":
                if target.text not in cat.arrow:
                    raise self._semantic(f"{cat_tok.text} has no morphism {target.text!r}", target)
                maps[target.text] = (target, self.matrix())
            else:
                raise self._fail(f"Expected 'dim' or 'map', found {kw.text!r}", kw)
            self.expect(";")

        mats: dict[str, Mat] = {}
        for m, (tok, rows) in maps.items():
            shape_ = (dim[cat.tgt(m)], dim[cat.src(m)])
            mats[m] = self._build_matrix(field, rows, shape_, tok)
        try:
            gens = {g: mats[g] for g in cat.generators if g in mats}
            rep = Rep.from_generators(cat, field, dim, gens)
        except AbexactError as exc:
            raise self._semantic(f"functor {name.text}: {exc.msg}", name) from exc
        for m, mat in mats.items():
            if rep.action[m] != mat:
                raise self._semantic(
                    f"functor {name.text}: map {m} disagrees with the composite of its generators",
                    maps[m][0],
                )
        self.ws.functors[name.text] = rep
        self.ws.functor_defs[name.text] = FunctorDef(cat_tok.text)
        self.ws.order.append(("functor", name.text))

    def _build_matrix(
        self, field: Field, rows: list[list[str]] | None, shape_: tuple[int, int], tok: Token
    ) -> Mat:
        r, c = shape_
        if rows is None:
            if r and c:
                raise self._semantic(f"[] given where a {r}x{c} matrix is needed", tok)
            return Mat.zeros(field, r, c)
        if len(rows) != r or any(len(row) != c for row in rows):
            raise self._semantic(f"matrix for {tok.text} must be {r}x{c}", tok)
        try:
            return Mat.from_rows(field, rows, c)
        except AbexactError as exc:
            raise self._semantic(exc.msg or "bad matrix", tok) from exc

    def natmap(self) -> None:
        self.expect("natmap")
        name = self.name()
        self._register("natmap", name, self.ws.natmaps)
        self.expect(":")
        src_tok = self.name()
        self.expect("->")
        tgt_tok = self.name()
        try:
            src = self.ws.functor(src_tok.text)
            tgt = self.ws.functor(tgt_tok.text)
        except UnknownName as exc:
            raise self._semantic(exc.msg or "unknown functor", src_tok) from exc
        self.expect("{")
        comp = {i: Mat.zeros(src.field, tgt.dim[i], src.dim[i]) for i in src.cat.objects}
        while not self.accept("}"):
            self.expect("comp")
            obj = self.name()
            if obj.text not in comp:
                raise self._semantic(f"no object {obj.text!r}", obj)
            self.expect("=")
            rows = self.matrix()
            self.expect(";")
            comp[obj.text] = self._build_matrix(
                src.field, rows, (tgt.dim[obj.text], src.dim[obj.text]), obj
            )
        try:
            nat = NatMap(src, tgt, comp)
        except AbexactError as exc:
            raise self._semantic(f"natmap {name.text}: {exc.msg}", name) from exc
        self.ws.natmaps[name.text] = nat
        self.ws.natmap_defs[name.text] = NatMapDef(src_tok.text, tgt_tok.text)
        self.ws.order.append(("natmap", name.text))

    def sequence(self) -> None:
        self.expect("ses")
        name = self.name()
        self._register("ses", name, self.ws.sequences)
        self.expect("{")
        parts: dict[str, Token] = {}
        while not self.accept("}"):
            key = self.name()
            if key.text not in {"mono", "epi"}:
                raise self._fail(f"Expected 'mono' or 'epi', found {key.text!r}", key)
            self.expect(":")
            parts[key.text] = self.name()
            self.expect(";")
        if set(parts) != {"mono", "epi"}:
            raise self._semantic(f"ses {name.text} needs both mono and epi", name)
        try:
            s = SES(self.ws.natmap(parts["mono"].text), self.ws.natmap(parts["epi"].text))
        except AbexactError as exc:
            raise self._semantic(f"ses {name.text}: {exc.msg}", name) from exc
        self.ws.sequences[name.text] = s
        self.ws.ses_defs[name.text] = SESDef(parts["mono"].text, parts["epi"].text)
        self.ws.order.append(("ses", name.text))


def parse(
    source: str, workspace: Workspace | None = None, *, closure_bound: int = DEFAULT_CLOSURE_BOUND
) -> Workspace:
    """Parse ``source`` into ``workspace`` (a fresh one by default)."""
    ws = Workspace() if workspace is None else workspace
    return _Parser(source, ws, closure_bound).parse()


# printing


def _fmt_matrix(m: Mat) -> str:
    if not m.rows or not m.cols:
        return "[]"
    rows = (", ".join(m.field.fmt(v) for v in row) for row in m.data)
    return "[" + ", ".join(f"[{r}]" for r in rows) + "]"


def _fmt_path(p: Path) -> str:
    if not p.arrows:
        return f"id_{p.obj}"
    return ".".join(reversed(p.arrows))


def _dump_category(name: str, d: CatDef) -> str:
    if isinstance(d, DerivedCat):
        return f"category {name} = {d.kind}({', '.join(d.args)});"
    lines = [f"category {name} {{", f"    objects: {', '.join(d.objects)};"]
    if d.arrows:
        arrows = ", ".join(f"{a.name}: {a.src} -> {a.tgt}" for a in d.arrows)
        lines.append(f"    arrows: {arrows};")
    if d.relations:
        rels = ", ".join(f"{_fmt_path(lhs)} = {_fmt_path(rhs)}" for lhs, rhs in d.relations)
        lines.append(f"    relations: {rels};")
    if d.closure_bound != DEFAULT_CLOSURE_BOUND:
        lines.append(f"    bound: {d.closure_bound};")
    lines.append("}")
    return "\n".join(lines)


def _dump_functor(name: str, d: FunctorDef, rep: Rep) -> str:
    lines = [f"functor {name} over {d.cat} field {rep.field.name} {{"]
    lines.extend(f"    dim {i} = {rep.dim[i]};" for i in rep.cat.objects)
    lines.extend(f"    map {g} = {_fmt_matrix(rep.action[g])};" for g in rep.cat.generators)
    lines.append("}")
    return "\n".join(lines)


def _dump_natmap(name: str, d: NatMapDef, nat: NatMap) -> str:
    lines = [f"natmap {name} : {d.src} -> {d.tgt} {{"]
    lines.extend(f"    comp {i} = {_fmt_matrix(nat.comp[i])};" for i in nat.cat.objects)
    lines.append("}")
    return "\n".join(lines)


def dumps(ws: Workspace) -> str:
    """Text that parses back to an equal workspace."""
    blocks: list[str] = []
    for kind, name in ws.order:
        match kind:
            case "category":
                blocks.append(_dump_category(name, ws.cat_defs[name]))
            case "functor":
                blocks.append(_dump_functor(name, ws.functor_defs[name], ws.functors[name]))
            case "natmap":
                blocks.append(_dump_natmap(name, ws.natmap_defs[name], ws.natmaps[name]))
            case "ses":
                d = ws.ses_defs[name]
                blocks.append(f"ses {name} {{\n    mono: {d.mono};\n    epi: {d.epi};\n}}")
    return "\n\n".join(blocks) + "\n"
