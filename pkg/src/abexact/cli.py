"""
This Source Code Form is subject to the terms of the Mozilla Public
License, v. 2.0. If a copy of the MPL was not distributed with this
file, You can obtain one at http://mozilla.org/MPL/2.0/.

Copyright (C) 2026 abexact contributors
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any, NoReturn

import msgspec

from ._type_stuff import Report
from .construct import ExtMap, phi, psi, verify_colim_star, z_eta
from .dsl import Workspace, parse
from .errors import AbexactError, ShapeError, UsageError
from .exactfield import Field
from .fincat import FinCat, Split, split
from .homext import ExtSpace, ext1
from .limits import colim, lim
from .logs import with_logging
from .rep import SES, NatMap, Rep, kappa
from .utils import Settings, digest
from .verify import (
    Verdict,
    decide_colim_exact,
    decide_lim_exact,
    verify_colim_star_claim,
    verify_discrete_corollaries,
    verify_thm_first,
    verify_thm_second,
)

log = logging.getLogger(__name__)

__all__ = ["encode_report", "main", "run"]


# reports


def _enc_hook(obj: Any) -> Any:
    match obj:
        case Fraction():
            return str(obj)
        case FinCat():
            return {"name": obj.name, "objects": list(obj.objects)}
        case Rep():
            return {
                "cat": obj.cat.name,
                "field": obj.field.name,
                "dim": obj.dim,
                "maps": {g: obj.action[g] for g in obj.cat.generators},
            }
        case NatMap():
            return {"src": obj.src.dim, "tgt": obj.tgt.dim, "comp": obj.comp}
        case SES():
            return {
                "a": obj.a,
                "b": obj.b,
                "c": obj.c,
                "mono": obj.mono.comp,
                "epi": obj.epi.comp,
            }
        case ExtSpace():
            return {"dim": obj.dim, "src": obj.M.dim, "tgt": obj.N.dim}
        case ExtMap():
            return {
                "name": obj.name,
                "matrix": obj.matrix,
                "rank": obj.rank,
                "domain_dim": obj.matrix.cols,
                "codomain_dim": obj.matrix.rows,
                "injective": obj.is_injective,
                "surjective": obj.is_surjective,
                "well_defined": obj.well_defined,
            }
        case _:
            msg = f"Objects of type {type(obj).__name__} are not supported in reports"
            raise NotImplementedError(msg)


_encoder = msgspec.json.Encoder(enc_hook=_enc_hook, order="deterministic")


def encode_report(report: Report) -> bytes:
    return _encoder.encode(report)


def _from_verdict(command: str, v: Verdict) -> Report:
    return Report(
        command=command,
        claim=v.claim,
        result=v.result,
        label=v.label,
        inputs=v.inputs,
        seed=v.seed,
        budget=v.budget,
        certificate=v.certificate,
    )


# argument parsing


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="abexact", description="Exactness of colimits and limits of diagrams"
    )
    parser.add_argument("--log-level", default=None, dest="log_level", help="Logging level.")
    parser.add_argument(
        "--no-log-file",
        action="store_true",
        default=False,
        dest="no_log_file",
        help="Log to stderr only.",
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", nargs="?", default=None, help="DSL file with definitions.")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="Write the JSON report here instead of stdout.")

    shape_opts = argparse.ArgumentParser(add_help=False)
    shape_opts.add_argument("--cat", required=True, help="Index category Σ.")
    shape_opts.add_argument("--base", default="Point", help="Base category Δ.")
    shape_opts.add_argument("--field", default="Q", help="Q or F<p>.")
    shape_opts.add_argument("--budget", type=int, default=None)

    subs = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    for name in ("colim", "lim"):
        p = subs.add_parser(name, parents=[common], help=f"The {name} of a functor.")
        p.add_argument("--functor", required=True)
        p.add_argument("--base", default=None, help="Read the functor as a diagram over this base.")

    p = subs.add_parser("ext", parents=[common], help="Ext¹ between two functors.")
    p.add_argument("--functor", required=True)
    p.add_argument("--into", required=True)

    for name in ("psi", "phi"):
        p = subs.add_parser(name, parents=[common], help=f"Assemble the {name} comparison map.")
        p.add_argument("--functor", required=True)
        p.add_argument("--base", default=None)
        target = p.add_mutually_exclusive_group(required=True)
        target.add_argument("--into", default=None, help="A functor over the base.")
        target.add_argument(
            "--adim", type=int, default=None, help="Constant functor k^n over the base."
        )

    p = subs.add_parser("zeta", parents=[common], help="Z_η and f_η of a sequence.")
    p.add_argument("--ses", required=True)
    p.add_argument("--base", default=None)

    subs.add_parser("decide-colim-exact", parents=[common, shape_opts])
    subs.add_parser("decide-lim-exact", parents=[common, shape_opts])

    p = subs.add_parser("verify", parents=[common, shape_opts])
    p.add_argument(
        "--claim",
        required=True,
        choices=["thm-first", "thm-second", "lemma-colim-star", "discrete-corollaries"],
    )
    p.add_argument("--max-dim", type=int, default=None, dest="max_dim")
    p.add_argument("--mode", choices=["direct", "pushout", "mixed"], default=None)
    p.add_argument("--sizes", default="1,2,3", help="Comma separated sizes of discrete Σ.")
    return parser


# commands


def _diagram_split(rep: Rep, base: str | None, ws: Workspace) -> Split:
    if base is None:
        return split(rep.cat)
    delta = ws.category(base)
    factors = rep.cat.factors
    if factors is None or factors[1] != delta:
        msg = f"{rep.cat.name} is not a product with {delta.name}"
        raise ShapeError(msg)
    return split(factors[0], delta)


def _target(ns: argparse.Namespace, sp: Split, field: Field, ws: Workspace) -> Rep:
    if ns.into is not None:
        a = ws.functor(ns.into)
        if a.cat != sp.delta:
            msg = f"{ns.into} is not a functor over {sp.delta.name}"
            raise ShapeError(msg)
        return a
    if ns.adim < 0:
        msg = "--adim must be nonnegative"
        raise UsageError(msg)
    return kappa(sp.delta, ns.adim, field)


def _limit_report(ns: argparse.Namespace, ws: Workspace) -> Report:
    f = ws.functor(ns.functor)
    sp = _diagram_split(f, ns.base, ws)
    inputs = {"functor": ns.functor, "sigma": sp.sigma.name, "delta": sp.delta.name}
    if ns.command == "colim":
        cd = colim(f, sp)
        cert: dict[str, Any] = {"apex": cd.apex, "legs": cd.rho}
        apex = cd.apex
    else:
        ld = lim(f, sp)
        cert = {"apex": ld.apex, "legs": ld.varrho}
        apex = ld.apex
    if sp.over_point:
        cert["apex_dim"] = apex.total_dim
    return Report(command=ns.command, result="ok", label="ok", inputs=inputs, certificate=cert)


def _ext_report(ns: argparse.Namespace, ws: Workspace) -> Report:
    space = ext1(ws.functor(ns.functor), ws.functor(ns.into))
    basis = [space.cocycle(x.coords) for x in space.basis()]
    return Report(
        command="ext",
        result="ok",
        label="ok",
        inputs={"functor": ns.functor, "into": ns.into},
        certificate={"dim": space.dim, "space": space, "basis_cocycles": basis},
    )


def _comparison_report(ns: argparse.Namespace, ws: Workspace) -> Report:
    f = ws.functor(ns.functor)
    sp = _diagram_split(f, ns.base, ws)
    a = _target(ns, sp, f.field, ws)
    seed = 0 if ns.seed is None else ns.seed
    build = psi if ns.command == "psi" else phi
    m = build(f, a, sp, rng=random.Random(seed))
    inputs = {
        "functor": ns.functor,
        "target": ns.into if ns.into is not None else f"k^{ns.adim}",
        "sigma": sp.sigma.name,
        "delta": sp.delta.name,
    }
    return Report(
        command=ns.command,
        result="ok",
        label="ok",
        inputs=inputs,
        seed=seed,
        certificate={"map": m},
    )


def _zeta_report(ns: argparse.Namespace, ws: Workspace) -> Report:
    eta = ws.ses(ns.ses)
    sp = _diagram_split(eta.b, ns.base, ws)
    zd = z_eta(eta, sp)
    star = verify_colim_star(eta, sp)
    cert: dict[str, Any] = {
        "z_dims": zd.z.dim,
        "f_eta": zd.f_eta,
        "g_eta": zd.g_eta,
        "mu_eta": zd.mu_eta,
        "f_eta_mono": zd.f_is_mono,
        "colim_star_dims": star.colim_dims,
        "colim_star_iso": star.is_iso,
    }
    return Report(
        command="zeta",
        result="ok",
        label="ok",
        inputs={"ses": ns.ses, "sigma": sp.sigma.name, "delta": sp.delta.name},
        certificate=cert,
    )


def _sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        msg = f"--sizes expects comma separated integers, got {text!r}"
        raise UsageError(msg) from None
    if not sizes or any(n < 1 for n in sizes):
        msg = "--sizes needs at least one positive size"
        raise UsageError(msg)
    return sizes


def _verdict(ns: argparse.Namespace, ws: Workspace, settings: Settings) -> Verdict:
    sigma = ws.category(ns.cat)
    delta = ws.category(ns.base)
    field = Field.parse(ns.field)
    seed = settings.seed if ns.seed is None else ns.seed
    budget = settings.budget if ns.budget is None else ns.budget
    if ns.command == "decide-colim-exact":
        return decide_colim_exact(sigma, delta, field, budget=budget or 0, seed=seed)
    if ns.command == "decide-lim-exact":
        return decide_lim_exact(sigma, delta, field)

    max_dim = settings.max_dim if ns.max_dim is None else ns.max_dim
    extra: dict[str, Any] = {"seed": seed, "max_dim": max_dim}
    if budget is not None:
        extra["budget"] = budget
    mode = {} if ns.mode is None else {"mode": ns.mode}
    match ns.claim:
        case "thm-first":
            return verify_thm_first(sigma, delta, field, **extra, **mode)
        case "thm-second":
            return verify_thm_second(sigma, delta, field, **extra)
        case "lemma-colim-star":
            return verify_colim_star_claim(sigma, delta, field, **extra, **mode)
        case _:
            samples = {} if budget is None else {"samples": budget}
            return verify_discrete_corollaries(
                delta, field, _sizes(ns.sizes), seed, max_dim=max_dim, **samples
            )


def _load(ns: argparse.Namespace, ws: Workspace, settings: Settings) -> None:
    if ns.file is None:
        return
    try:
        text = Path(ns.file).read_text(encoding="utf-8")
    except OSError as exc:
        msg = f"Cannot read {ns.file}: {exc.strerror}"
        raise UsageError(msg) from None
    parse(text, ws, closure_bound=settings.closure_bound)
    log.info("loaded %s: %r", ns.file, ws)


def run(
    argv: Sequence[str],
    workspace: Workspace | None = None,
    *,
    settings: Settings | None = None,
) -> Report:
    """Run one command line (without the program name) and return its report."""
    settings = Settings() if settings is None else settings
    ns = build_parser().parse_args(list(argv))
    return _run(ns, Workspace() if workspace is None else workspace, settings)


def _run(ns: argparse.Namespace, ws: Workspace, settings: Settings) -> Report:
    _load(ns, ws, settings)
    log.info("running %s", ns.command)
    match ns.command:
        case "colim" | "lim":
            report = _limit_report(ns, ws)
        case "ext":
            report = _ext_report(ns, ws)
        case "psi" | "phi":
            report = _comparison_report(ns, ws)
        case "zeta":
            report = _zeta_report(ns, ws)
        case _:
            report = _from_verdict(ns.command, _verdict(ns, ws, settings))
    log.info("%s: %s", ns.command, report.label)
    return report


def _fail(msg: str) -> NoReturn:
    sys.stderr.write(f"abexact: error: {msg}\n")
    sys.exit(2)


def main(argv: Sequence[str] | None = None) -> None:
    os.umask(0o077)

    try:
        settings = Settings.from_env()
        ns = build_parser().parse_args(sys.argv[1:] if argv is None else list(argv))
    except AbexactError as exc:
        _fail(exc.msg or "invalid arguments")

    level: int | None
    if ns.log_level is None:
        level = settings.level
    else:
        level = logging.getLevelNamesMapping().get(ns.log_level.upper())
    if level is None:
        _fail(f"unknown log level {ns.log_level!r}")

    with with_logging(level, log_file=settings.log_file and not ns.no_log_file):
        try:
            report = _run(ns, Workspace(), settings)
        except AbexactError as exc:
            log.debug("command failed", exc_info=exc)
            _fail(exc.msg or type(exc).__name__)
        data = encode_report(report)
        log.info("report digest %s", digest(data))

    if ns.out is None:
        sys.stdout.buffer.write(data + b"\n")
        sys.stdout.flush()
    else:
        try:
            Path(ns.out).write_bytes(data + b"\n")
        except OSError as exc:
            _fail(f"cannot write report to {ns.out}: {exc.strerror or exc}")
    sys.exit(report.exit_code)


if __name__ == "__main__":
    main()
