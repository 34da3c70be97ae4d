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

from .errors import KernelNotConstant, NotACocone, NotDiscrete, ShapeError, UniversalPropertyError
from .exactfield import Mat, Scalar, solve
from .fincat import POINT, Split, one_point_extension, split
from .homext import (
    ExtClass,
    ExtSpace,
    classify_ses,
    dual,
    dual_map,
    ext1,
    ext_dual,
    ext_pullback,
    ext_pushout,
    pullback_ses,
    pushout_ses,
    realize_class,
)
from .limits import (
    ColimData,
    colim,
    colim_map,
    induced_from_cocone_nat,
    lim,
    rho_nat,
    varrho_nat,
)
from .rep import (
    SES,
    NatMap,
    Pushout,
    Rep,
    kappa_over,
    kappa_over_map,
    restrict,
    restrict_map,
    restrict_ses,
)

log = logging.getLogger(__name__)

__all__ = [
    "ColimStarCertificate",
    "DualityCheck",
    "ExtMap",
    "ExtendedEta",
    "NaturalitySquare",
    "PushoutEta",
    "XiTheta",
    "ZEtaData",
    "as_constant",
    "canonical_coproduct_map",
    "extend_over_star",
    "phi",
    "phi_duality_check",
    "psi",
    "psi_naturality_in_a",
    "psi_naturality_in_f",
    "pushout_eta",
    "verify_colim_star",
    "xi_theta",
    "z_eta",
]


def _split_of(s: SES, sp: Split | None) -> Split:
    sp = split(s.cat) if sp is None else sp
    if s.cat != sp.flat:
        msg = f"Sequence lives over {s.cat.name}, not over {sp.flat.name}"
        raise ShapeError(msg)
    return sp


def _at_point(phi: NatMap) -> Mat:
    if phi.cat != POINT:
        msg = "Matrix views exist only over the point base"
        raise ShapeError(msg)
    return phi.comp[POINT.objects[0]]


def as_constant(k: Rep, sp: Split) -> Rep:
    """Recover ``A`` from ``κ(A)``."""
    if k.cat != sp.flat:
        msg = f"{k!r} does not live over {sp.flat.name}"
        raise ShapeError(msg)
    if not sp.sigma.objects:
        return Rep.zero(sp.delta, k.field)
    a = restrict(k, sp, sp.sigma.objects[0])
    if kappa_over(sp, a) != k:
        msg = f"{k!r} is not a constant diagram over {sp.sigma.name}"
        raise KernelNotConstant(msg)
    return a


class ExtendedEta(NamedTuple):
    functor: Rep
    eta_prime: SES
    split: Split


def extend_over_star(eta: SES, sp: Split | None = None) -> ExtendedEta:
    """``F_η`` over the one-point extension, with ``κ(A) -> F_η -> G'`` and ``G'(*) = 0``."""
    sp = _split_of(eta, sp)
    a = as_constant(eta.a, sp)
    f, g, field = eta.b, eta.c, eta.field
    star_cat = one_point_extension(sp.sigma)
    sp_star = split(star_cat, sp.delta)
    star = star_cat.objects[0]
    alphas = {f"alpha_{i}": i for i in sp.sigma.objects}

    dim: dict[str, int] = {}
    g_dim: dict[str, int] = {}
    for x in sp.delta.objects:
        dim[sp_star.obj(star, x)] = a.dim[x]
        g_dim[sp_star.obj(star, x)] = 0
        for i in sp.sigma.objects:
            dim[sp_star.obj(i, x)] = f.dim[sp.obj(i, x)]
            g_dim[sp_star.obj(i, x)] = g.dim[sp.obj(i, x)]

    action: dict[str, Mat] = {}
    g_action: dict[str, Mat] = {}
    for lam in star_cat.morphisms:
        for beta in sp.delta.morphisms:
            key = sp_star.mor(lam.name, beta.name)
            if lam.src != star:
                action[key] = f.action[sp.mor(lam.name, beta.name)]
                g_action[key] = g.action[sp.mor(lam.name, beta.name)]
            elif lam.tgt == star:
                action[key] = a.action[beta.name]
                g_action[key] = Mat.zeros(field, 0, 0)
            else:
                i = alphas[lam.name]
                action[key] = eta.mono.comp[sp.obj(i, beta.tgt)] @ a.action[beta.name]
                g_action[key] = Mat.zeros(field, g.dim[sp.obj(i, beta.tgt)], 0)

    f_eta = Rep(sp_star.flat, field, dim, action)
    g_prime = Rep(sp_star.flat, field, g_dim, g_action)

    mono: dict[str, Mat] = {}
    epi: dict[str, Mat] = {}
    for x in sp.delta.objects:
        mono[sp_star.obj(star, x)] = Mat.identity(field, a.dim[x])
        epi[sp_star.obj(star, x)] = Mat.zeros(field, 0, a.dim[x])
        for i in sp.sigma.objects:
            mono[sp_star.obj(i, x)] = eta.mono.comp[sp.obj(i, x)]
            epi[sp_star.obj(i, x)] = eta.epi.comp[sp.obj(i, x)]
    eta_prime = SES(
        NatMap(kappa_over(sp_star, a), f_eta, mono),
        NatMap(f_eta, g_prime, epi),
    )
    return ExtendedEta(f_eta, eta_prime, sp_star)


class ZEtaData:
    """The pushout of ``colim(φ)`` against the codiagonal, with its bottom row ``A -> Z -> C_G``."""

    __slots__ = (
        "a",
        "colim_f",
        "colim_g",
        "colim_k",
        "colim_phi",
        "colim_psi",
        "eta",
        "f_eta",
        "g_eta",
        "mu_eta",
        "nabla",
        "pushout",
        "split",
        "z",
    )

    def __init__(self, eta: SES, sp: Split) -> None:
        self.eta = eta
        self.split = sp
        self.a = as_constant(eta.a, sp)
        self.colim_k = colim(eta.a, sp)
        self.colim_f = colim(eta.b, sp)
        self.colim_g = colim(eta.c, sp)
        self.colim_phi = colim_map(eta.mono, sp, self.colim_k, self.colim_f)
        self.colim_psi = colim_map(eta.epi, sp, self.colim_f, self.colim_g)
        legs = {i: NatMap.identity(self.a) for i in sp.sigma.objects}
        self.nabla = induced_from_cocone_nat(self.colim_k, legs, self.a)
        self.pushout = Pushout(self.nabla, self.colim_phi)
        self.z = self.pushout.rep
        self.f_eta = self.pushout.left
        self.mu_eta = self.pushout.right
        self.g_eta = self.pushout.induced(NatMap.zero(self.a, self.colim_g.apex), self.colim_psi)

    def __repr__(self) -> str:
        return f"<ZEtaData Z dims {self.z.dim}, f_eta mono: {self.f_is_mono}>"

    @property
    def z_dim(self) -> int:
        return self.z.total_dim

    @property
    def f_is_mono(self) -> bool:
        return self.f_eta.is_mono()

    @property
    def f_matrix(self) -> Mat:
        return _at_point(self.f_eta)

    @property
    def g_matrix(self) -> Mat:
        return _at_point(self.g_eta)

    @property
    def mu_matrix(self) -> Mat:
        return _at_point(self.mu_eta)

    def violations(self) -> list[str]:
        out: list[str] = []
        if self.f_eta @ self.nabla != self.mu_eta @ self.colim_phi:
            out.append("f_eta ∘ nabla != mu_eta ∘ colim(phi)")
        if not (self.g_eta @ self.f_eta).is_zero():
            out.append("g_eta ∘ f_eta != 0")
        if not self.g_eta.is_epi():
            out.append("g_eta is not surjective")
        if self.g_eta @ self.mu_eta != self.colim_psi:
            out.append("g_eta ∘ mu_eta != colim(psi)")
        for x in self.split.delta.objects:
            if self.f_eta.comp[x].rank() + self.colim_g.apex.dim[x] != self.z.dim[x]:
                out.append(f"bottom row is not exact at Z over {x}")
        return out

    def bottom_row(self) -> SES | None:
        """``A -> Z_η -> C_G`` when ``f_η`` is mono."""
        if not self.f_is_mono:
            return None
        return SES(self.f_eta, self.g_eta)


def z_eta(eta: SES, sp: Split | None = None) -> ZEtaData:
    sp = _split_of(eta, sp)
    data = ZEtaData(eta, sp)
    violations = data.violations()
    if violations:
        msg = f"Pushout square (A, Z, C_G) is inconsistent: {violations[0]}"
        log.error("%s", msg)
        raise UniversalPropertyError(msg)
    log.debug("z_eta over %s: Z dims %s, f_eta mono %s", sp.sigma.name, data.z.dim, data.f_is_mono)
    return data


class ColimStarCertificate(NamedTuple):
    colim_dims: dict[str, int]
    z_dims: dict[str, int]
    comparison: NatMap | None
    is_iso: bool
    detail: str


def verify_colim_star(eta: SES, sp: Split | None = None) -> ColimStarCertificate:
    """Compare ``colim F_η`` over the one-point extension with ``Z_η`` through the cocone ``ξ``."""
    sp = _split_of(eta, sp)
    ext = extend_over_star(eta, sp)
    cd_star = colim(ext.functor, ext.split)
    zd = z_eta(eta, sp)
    star = ext.split.sigma.objects[0]
    legs = {i: zd.mu_eta @ zd.colim_f.rho[i] for i in sp.sigma.objects}
    legs[star] = zd.f_eta
    try:
        comparison = induced_from_cocone_nat(cd_star, legs, zd.z)
    except NotACocone as exc:
        log.error("xi is not a cocone on F_eta: %s", exc.msg)
        return ColimStarCertificate(cd_star.apex.dim, zd.z.dim, None, False, exc.msg or "")
    iso = comparison.is_iso()
    if not iso:
        log.error(
            "comparison colim F_eta -> Z_eta is not invertible (dims %s vs %s)",
            cd_star.apex.dim,
            zd.z.dim,
        )
    detail = "comparison is invertible" if iso else "comparison is not invertible"
    return ColimStarCertificate(cd_star.apex.dim, zd.z.dim, comparison, iso, detail)


class ExtMap:
    """A linear map between (direct sums of) Ext spaces in their chosen bases."""

    __slots__ = ("codomain", "domain", "matrix", "name", "well_defined")

    def __init__(
        self,
        name: str,
        domain: Sequence[ExtSpace],
        codomain: Sequence[ExtSpace],
        matrix: Mat,
        *,
        well_defined: bool = True,
    ) -> None:
        self.name = name
        self.domain = tuple(domain)
        self.codomain = tuple(codomain)
        expected = (sum(s.dim for s in self.codomain), sum(s.dim for s in self.domain))
        if matrix.shape != expected:
            msg = f"{name} matrix has shape {matrix.shape}, expected {expected}"
            raise ShapeError(msg)
        self.matrix = matrix
        self.well_defined = well_defined

    def __repr__(self) -> str:
        return f"<ExtMap {self.name}: dim {self.matrix.cols} -> dim {self.matrix.rows}, rank {self.rank}>"

    @property
    def rank(self) -> int:
        return self.matrix.rank()

    @property
    def is_injective(self) -> bool:
        return self.matrix.is_injective()

    @property
    def is_surjective(self) -> bool:
        return self.matrix.is_surjective()

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective

    def apply(self, coords: Sequence[Scalar]) -> tuple[Scalar, ...]:
        col = Mat.from_columns(self.matrix.field, [tuple(coords)], self.matrix.cols)
        return (self.matrix @ col).column(0)

    def preimage(self, coords: Sequence[Scalar]) -> tuple[Scalar, ...] | None:
        """Some domain vector sent to ``coords``, or ``None`` when ``coords`` is outside the image."""
        col = Mat.from_columns(self.matrix.field, [tuple(coords)], self.matrix.rows)
        x = solve(self.matrix, col)
        return None if x is None else x.column(0)


type Transport = Callable[[SES], Sequence[SES]]


def _classify_all(seqs: Sequence[SES], targets: Sequence[ExtSpace]) -> tuple[Scalar, ...]:
    return tuple(
        c for s, t in zip(seqs, targets, strict=True) for c in classify_ses(s, t).coords
    )


def _assemble(
    name: str,
    dom: ExtSpace,
    targets: Sequence[ExtSpace],
    transport: Transport,
    rng: random.Random | None,
) -> ExtMap:
    rows = sum(t.dim for t in targets)
    cols = [_classify_all(transport(realize_class(e)), targets) for e in dom.basis()]
    matrix = Mat.from_columns(dom.field, cols, rows)
    well_defined = True
    if rng is not None:
        # a second realization, plus a random combination for linearity
        for e, col in zip(dom.basis(), cols, strict=True):
            if _classify_all(transport(realize_class(e, rng)), targets) != col:
                log.error("%s depends on the realization of basis class %s", name, e.coords)
                well_defined = False
        if dom.dim:
            coeffs = tuple(dom.field.sample(rng) for _ in range(dom.dim))
            combo = ExtClass(dom, coeffs)
            got = _classify_all(transport(realize_class(combo, rng)), targets)
            want = (matrix @ Mat.from_columns(dom.field, [coeffs], dom.dim)).column(0)
            if got != want:
                log.error("%s is not linear on the combination %s", name, coeffs)
                well_defined = False
    return ExtMap(name, [dom], targets, matrix, well_defined=well_defined)


def _split_for_rep(f: Rep, sp: Split | None) -> Split:
    sp = split(f.cat) if sp is None else sp
    if f.cat != sp.flat:
        msg = f"{f!r} is not a diagram over {sp.sigma.name} in Fun({sp.delta.name}, Vect)"
        raise ShapeError(msg)
    return sp


def _kappa_ses(sp: Split, eps: SES) -> SES:
    return SES(kappa_over_map(sp, eps.mono), kappa_over_map(sp, eps.epi))


def psi(
    f: Rep,
    a: Rep,
    sp: Split | None = None,
    *,
    rng: random.Random | None = None,
    cd: ColimData | None = None,
) -> ExtMap:
    """``Ext¹(C_F, A) -> Ext¹(F, κ(A))``: apply κ and pull back along ``ρ^F``."""
    sp = _split_for_rep(f, sp)
    cd = colim(f, sp) if cd is None else cd
    rho = rho_nat(cd)
    dom = ext1(cd.apex, a)
    cod = ext1(f, kappa_over(sp, a))
    out = _assemble("Psi", dom, [cod], lambda eps: [pullback_ses(_kappa_ses(sp, eps), rho)], rng)
    log.debug("Psi over %s: %s", sp.sigma.name, out)
    return out


def phi(f: Rep, b: Rep, sp: Split | None = None, *, rng: random.Random | None = None) -> ExtMap:
    """``Ext¹(B, L_F) -> Ext¹(κ(B), F)``: apply κ and push out along ``ϱ^F``."""
    sp = _split_for_rep(f, sp)
    ld = lim(f, sp)
    varrho = varrho_nat(ld)
    dom = ext1(b, ld.apex)
    cod = ext1(kappa_over(sp, b), f)
    out = _assemble("Phi", dom, [cod], lambda eps: [pushout_ses(_kappa_ses(sp, eps), varrho)], rng)
    log.debug("Phi over %s: %s", sp.sigma.name, out)
    return out


class DualityCheck(NamedTuple):
    holds: bool
    lhs: Mat
    rhs: Mat


def phi_duality_check(f: Rep, b: Rep, sp: Split | None = None) -> DualityCheck:
    """Φ against Ψ over the opposite data, transported by pointwise duals.

    Compares ``D ∘ Φ`` with ``Ψ* ∘ θ^* ∘ D`` where ``θ: C_{F*} -> (L_F)*`` comes from the
    dualized limit cone.
    """
    sp = _split_for_rep(f, sp)
    sp_op = sp.opposite()
    ld = lim(f, sp)
    phi_map = phi(f, b, sp)
    df = dual(f)
    cd_dual = colim(df, sp_op)
    legs = {i: dual_map(ld.varrho[i]) for i in sp.sigma.objects}
    theta = induced_from_cocone_nat(cd_dual, legs, dual(ld.apex))
    psi_op = psi(df, dual(b), sp_op, cd=cd_dual)

    dual_dom = ext1(dual(ld.apex), dual(b))
    d_dom = ext_dual(phi_map.domain[0], dual_dom)
    pulled = ext_pullback(dual_dom, theta, psi_op.domain[0])
    d_cod = ext_dual(phi_map.codomain[0], psi_op.codomain[0])

    lhs = d_cod @ phi_map.matrix
    rhs = psi_op.matrix @ pulled @ d_dom
    holds = lhs == rhs
    if not holds:
        log.warning("Phi disagrees with the dual of Psi over %s", sp.sigma.name)
    return DualityCheck(holds, lhs, rhs)


class XiTheta(NamedTuple):
    xi: ExtMap
    theta: ExtMap

    @property
    def holds(self) -> bool:
        return self.xi.is_bijective and self.theta.is_bijective


def _require_discrete(sp: Split) -> None:
    if not sp.sigma.is_discrete:
        msg = f"{sp.sigma.name} is not discrete"
        raise NotDiscrete(msg)


def xi_theta(f: Rep, a: Rep, sp: Split | None = None) -> XiTheta:
    """Componentwise restriction ``Ξ`` and ``Θ`` for a discrete index category."""
    sp = _split_for_rep(f, sp)
    _require_discrete(sp)
    objs = sp.sigma.objects
    ka = kappa_over(sp, a)

    def restrict_all(s: SES) -> list[SES]:
        return [restrict_ses(s, sp, i) for i in objs]

    xi_targets = [ext1(restrict(f, sp, i), a) for i in objs]
    xi = _assemble("Xi", ext1(f, ka), xi_targets, restrict_all, None)
    theta_targets = [ext1(a, restrict(f, sp, i)) for i in objs]
    theta = _assemble("Theta", ext1(ka, f), theta_targets, restrict_all, None)
    out = XiTheta(xi, theta)
    if not out.holds:
        log.error("componentwise restriction is not invertible over %s", sp.sigma.name)
    return out


def canonical_coproduct_map(f: Rep, a: Rep, sp: Split | None = None) -> ExtMap:
    """``Ext¹(⊕F(i), A) -> ⊕ Ext¹(F(i), A)`` along the coproduct injections."""
    sp = _split_for_rep(f, sp)
    _require_discrete(sp)
    cd = colim(f, sp)
    dom = ext1(cd.apex, a)
    targets = [ext1(restrict(f, sp, i), a) for i in sp.sigma.objects]
    blocks = [ext_pullback(dom, cd.rho[i], t) for i, t in zip(sp.sigma.objects, targets, strict=True)]
    matrix = Mat.vstack(dom.field, blocks, dom.dim)
    return ExtMap("canonical", [dom], targets, matrix)


class NaturalitySquare(NamedTuple):
    holds: bool
    lhs: Mat
    rhs: Mat


def psi_naturality_in_a(f: Rep, a_map: NatMap, sp: Split | None = None) -> NaturalitySquare:
    """``Ψ_{F,A'} ∘ a_* = κ(a)_* ∘ Ψ_{F,A}`` for ``a: A -> A'``."""
    sp = _split_for_rep(f, sp)
    cd = colim(f, sp)
    before = psi(f, a_map.src, sp, cd=cd)
    after = psi(f, a_map.tgt, sp, cd=cd)
    top = ext_pushout(before.domain[0], a_map, after.domain[0])
    side = ext_pushout(before.codomain[0], kappa_over_map(sp, a_map), after.codomain[0])
    lhs = after.matrix @ top
    rhs = side @ before.matrix
    return NaturalitySquare(lhs == rhs, lhs, rhs)


def psi_naturality_in_f(t: NatMap, a: Rep, sp: Split | None = None) -> NaturalitySquare:
    """``Ψ_{F',A} ∘ colim(t)^* = t^* ∘ Ψ_{F,A}`` for ``t: F' -> F``."""
    sp = _split_for_rep(t.src, sp)
    cd_src = colim(t.src, sp)
    cd_tgt = colim(t.tgt, sp)
    before = psi(t.tgt, a, sp, cd=cd_tgt)
    after = psi(t.src, a, sp, cd=cd_src)
    colim_t = colim_map(t, sp, cd_src, cd_tgt)
    top = ext_pullback(before.domain[0], colim_t, after.domain[0])
    side = ext_pullback(before.codomain[0], t, after.codomain[0])
    lhs = after.matrix @ top
    rhs = side @ before.matrix
    return NaturalitySquare(lhs == rhs, lhs, rhs)


class PushoutEta(NamedTuple):
    eta: SES
    omega: NatMap
    upsilon: NatMap
    gamma: NatMap
    theta: NatMap
    zeta_colim_mono: bool
    f_eta_mono: bool

    @property
    def agrees(self) -> bool:
        return self.zeta_colim_mono == self.f_eta_mono and self.theta.is_iso()


def pushout_eta(ses: SES, sp: Split | None = None) -> PushoutEta:
    """Push ``H -> N -> G`` out along ``ρ^H`` to get ``κ(C_H) -> F -> G``.

    ``θ: Z_η -> C_N`` is the map with ``θ ∘ μ_η = γ`` and ``θ ∘ f_η = colim(ζ)``; it is
    invertible, so ``f_η`` is mono exactly when ``colim(ζ)`` is.
    """
    sp = _split_of(ses, sp)
    cd_h = colim(ses.a, sp)
    cd_n = colim(ses.b, sp)
    rho_h = rho_nat(cd_h)
    po = Pushout(ses.mono, rho_h)
    epi = po.induced(ses.epi, NatMap.zero(rho_h.tgt, ses.c))
    eta = SES(po.right, epi)

    colim_zeta = colim_map(ses.mono, sp, cd_h, cd_n)
    upsilon = po.induced(rho_nat(cd_n), kappa_over_map(sp, colim_zeta))
    zd = z_eta(eta, sp)
    legs = {i: restrict_map(upsilon, sp, i) for i in sp.sigma.objects}
    gamma = induced_from_cocone_nat(zd.colim_f, legs, cd_n.apex)
    theta = zd.pushout.induced(colim_zeta, gamma)
    out = PushoutEta(eta, po.left, upsilon, gamma, theta, colim_zeta.is_mono(), zd.f_is_mono)
    if not out.agrees:
        log.error("pushout route disagrees: colim(zeta) mono %s, f_eta mono %s", *out[5:7])
    return out
