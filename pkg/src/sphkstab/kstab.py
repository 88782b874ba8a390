"""Stability verdicts, Futaki pairings and the soliton solver.

The verdict tests whether ``bar - 2ρ_P`` lies in the relative interior of Ξ,
the dual of the lifted valuation cone.  That is decided generator by
generator: zero against the lineality, strictly positive against each ray.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _linalg as la
from .cones import ValuationConeData, classify_point_in_cone, membership
from .dhmeasure import DHDensity, Moments, barycenter_error, moments_exponential
from .errors import ConvergenceError, DivergenceError, InputError
from .polytope import MomentPolytope
from .rootsys import RootSystemData, derive_phi_p, two_rho_p as sum_roots

STATUSES = ("stable", "semistable_not_stable", "unstable", "inconclusive")
# exponent spread over the polytope beyond which iterates count as diverging
MAX_EXPONENT_SPREAD = 200.0


@dataclass(frozen=True)
class SphericalDatum:
    root_system: RootSystemData
    delta_plus: MomentPolytope
    valuation: ValuationConeData
    phi_p: tuple
    two_rho_p: tuple
    zeta_lift: tuple | None = None
    name: str = ""

    @property
    def dim(self) -> int:
        return self.root_system.ambient_dim

    @property
    def forms(self) -> tuple:
        return tuple(self.root_system.linear_form(a) for a in self.phi_p)

    def density(self, zeta: Sequence | None = None) -> DHDensity:
        z = self.zeta_lift if zeta is None else zeta
        return DHDensity.from_zeta(self.forms, la.scale(2, self.two_rho_p), z)

    def with_zeta(self, zeta: Sequence | None) -> "SphericalDatum":
        if zeta is not None:
            zeta = tuple(float(x) for x in zeta)
            _check_zeta(zeta, self.valuation)
        return replace(self, zeta_lift=zeta)

    @property
    def zeta_is_zero(self) -> bool:
        return self.zeta_lift is None or all(x == 0 for x in self.zeta_lift)


def _check_zeta(zeta: Sequence[float], vc: ValuationConeData) -> None:
    z = np.array([float(x) for x in zeta])
    if len(z) != vc.dim:
        raise InputError(f"zeta has length {len(z)}, expected {vc.dim}", "/zeta/lift")
    if not np.any(z):
        return
    if not vc.lineality_basis:
        raise InputError("zeta must lie in the lineality space, which is zero", "/zeta/lift")
    basis = np.array([[float(x) for x in l] for l in vc.lineality_basis]).T
    coef, *_ = np.linalg.lstsq(basis, z, rcond=None)
    if np.abs(basis @ coef - z).max() > 1e-9 * max(1.0, np.abs(z).max()):
        raise InputError("zeta does not lie in the span of the lineality basis", "/zeta/lift")


def make_datum(root_system: RootSystemData, delta_plus: MomentPolytope, valuation: ValuationConeData,
               phi_p: Sequence[Sequence] | None = None, two_rho_p: Sequence | None = None,
               zeta_lift: Sequence | None = None, name: str = "") -> SphericalDatum:
    """Assemble and validate a problem instance.

    ``phi_p`` defaults to the positive roots not vanishing on ``delta_plus``;
    an explicit multiset (for instance each root twice) may be given.
    ``two_rho_p`` defaults to the sum of the distinct roots of ``phi_p``.
    """
    n = root_system.ambient_dim
    if delta_plus.ambient_dim != n:
        raise InputError("polytope and root system have different dimensions", "/polytope")
    if valuation.dim != n:
        raise InputError("valuation cone and root system have different dimensions", "/valuation")
    derived = derive_phi_p(root_system, delta_plus)
    if phi_p is None:
        phi = derived
    else:
        phi = tuple(la.vec(a) for a in phi_p)
        if any(len(a) != n for a in phi):
            raise InputError("phi_p entries have the wrong dimension", "/density/phi_p")
        if set(phi) != set(derived):
            warnings.warn("phi_p differs from the roots not vanishing on the polytope", stacklevel=2)
    distinct = list(dict.fromkeys(phi))
    trp = sum_roots(distinct, n) if two_rho_p is None else la.vec(two_rho_p)
    if len(trp) != n:
        raise InputError("two_rho_p has the wrong dimension", "/density/two_rho_p")
    if valuation.m_minus_basis:
        for v in delta_plus.vertices:
            if not la.in_span(la.sub(v, trp), valuation.m_minus_basis):
                warnings.warn("polytope is not contained in 2ρ_P + span(M_-); "
                              "the verdict depends on the chosen lift of zeta", stacklevel=2)
                break
    z = None
    if zeta_lift is not None:
        z = tuple(float(x) for x in zeta_lift)
        _check_zeta(z, valuation)
    return SphericalDatum(root_system, delta_plus, valuation, phi, trp, z, name)


@dataclass(frozen=True)
class Verdict:
    status: str
    barycenter: tuple
    error_bound: float
    margins: tuple           # (kind, generator, value)
    destabilizer: tuple | None = None   # (generator, description)
    soliton: tuple | None = None        # (zeta, residual)
    exact: bool = True
    mass: object = None
    quadrature_order: int = 0


def datum_moments(datum: SphericalDatum, tol: float = 1e-10, second: bool = False,
                  zeta: Sequence | None = None, force_quadrature: bool = False) -> Moments:
    return moments_exponential(datum.delta_plus, datum.density(zeta), tol, second=second,
                               force_quadrature=force_quadrature)


def _l1(v) -> float:
    return float(sum(abs(x) for x in v))


def check_kstability(datum: SphericalDatum, tol: float = 1e-10) -> Verdict:
    """Decide whether ``bar - 2ρ_P`` is in the relative interior of Ξ."""
    m = datum_moments(datum, tol)
    bar = m.barycenter()
    point = la.sub(bar, datum.two_rho_p) if m.exact else tuple(
        b - float(t) for b, t in zip(bar, datum.two_rho_p))
    vc = datum.valuation
    if m.exact:
        res = membership(point, vc, strict=True)
        status = {"inside_relint": "stable", "on_boundary": "semistable_not_stable",
                  "outside": "unstable"}[res.verdict]
        destab = None
        if res.verdict == "outside":
            destab = (res.violating_generator, _describe(datum, res.violating_generator))
        return Verdict(status, bar, 0.0, res.margins, destab, exact=True, mass=m.mass)
    err = barycenter_error(datum.delta_plus, m)
    margins = []
    negative = uncertain = None
    for kind, g in vc.generators():
        val = float(sum(x * float(y) for x, y in zip(point, g)))
        margins.append((kind, g, val))
        e = err * _l1(g)
        if kind == "ray":
            if val < -e and negative is None:
                negative = g
            elif abs(val) <= e and uncertain is None:
                uncertain = g
        elif abs(val) > e + tol * _l1(g) and negative is None:
            negative = g if val < 0 else la.neg(g)
    if negative is not None:
        status, destab = "unstable", (negative, _describe(datum, negative))
    elif uncertain is not None:
        status, destab = "inconclusive", None
    else:
        status, destab = "stable", None
    return Verdict(status, bar, err, tuple(margins), destab, exact=False, mass=m.mass,
                   quadrature_order=m.order)


def _describe(datum: SphericalDatum, g: Sequence) -> str:
    text = f"one-parameter degeneration along xi = pi({', '.join(la.fmt_vec(g))})"
    try:
        return f"{text}; {classify_degeneration(datum, g)}"
    except InputError:
        return text


def futaki_pairing(datum: SphericalDatum, xi_lift: Sequence, tol: float = 1e-10) -> tuple:
    """``<bar - 2ρ_P, xi>`` and an error bound (0 when exact)."""
    if len(xi_lift) != datum.dim:
        raise InputError(f"xi has length {len(xi_lift)}, expected {datum.dim}")
    m = datum_moments(datum, tol)
    bar = m.barycenter()
    if m.exact:
        xi = la.vec(xi_lift)
        return la.dot(la.sub(bar, datum.two_rho_p), xi), 0.0
    xi = [float(x) for x in xi_lift]
    val = sum((b - float(t)) * x for b, t, x in zip(bar, datum.two_rho_p, xi))
    return val, barycenter_error(datum.delta_plus, m) * sum(abs(x) for x in xi)


def classify_degeneration(datum: SphericalDatum, xi_lift: Sequence) -> str:
    """Kind of special degeneration induced by ``xi`` in the valuation cone."""
    where = classify_point_in_cone(xi_lift, datum.valuation)
    return {
        "lineality": "product-type (central fiber isomorphic to X)",
        "interior": "horospherical central fiber",
        "face": "proper spherical degeneration",
    }[where]


# soliton solver

@dataclass(frozen=True)
class LogPartition:
    value: float            # h(ζ) = log mass
    gradient: np.ndarray    # ∇h = -2 (bar - 2ρ_P)
    hessian: np.ndarray     # 4 Cov
    error_bound: float      # bound on the barycenter error
    barycenter: tuple


def log_partition(datum: SphericalDatum, zeta: Sequence[float], tol: float = 1e-12,
                  force_quadrature: bool = False) -> LogPartition:
    """The convex function h(ζ) = log ∫ e^{<4ρ_P - 2p, ζ>} ∏ κ(α,p) dp with derivatives."""
    zeta = [float(x) for x in zeta]
    m = datum_moments(datum, tol, second=True, zeta=zeta, force_quadrature=force_quadrature)
    if m.exact:
        bar_q = m.barycenter()
        cov = m.covariance()
        val = math.log(m.mass) + m.log_scale if m.mass > 0 else -math.inf
        bar = np.array([float(x) for x in bar_q])
        cov = np.array([[float(x) for x in r] for r in cov])
        err = 0.0
    else:
        bar = np.array(m.barycenter())
        cov = np.array(m.covariance())
        val = math.log(m.mass) + m.log_scale
        err = barycenter_error(datum.delta_plus, m)
        bar_q = tuple(bar)
    two_rho = np.array([float(x) for x in datum.two_rho_p])
    return LogPartition(val, -2.0 * (bar - two_rho), 4.0 * cov, err, bar_q)


@dataclass(frozen=True)
class SolitonResult:
    zeta: tuple
    residual: float
    iterations: int
    converged: bool
    trace: tuple = field(default=(), repr=False)  # per iterate: (zeta, h, residual, hessian eigenvalues)


def effective_directions(datum: SphericalDatum) -> tuple[tuple, tuple]:
    """Split the lineality space into directions that move the density and the rest.

    Returns ``(effective, inert)``: rational bases of lineality vectors ℓ with
    ``<p, ℓ>`` non-constant on the polytope, and of those with it constant.
    """
    lin = datum.valuation.lineality_basis
    dirs = datum.delta_plus.direction_basis
    k = len(lin)
    if k == 0:
        return (), ()
    a = [tuple(la.dot(d, l) for l in lin) for d in dirs]
    rows = la.span_basis(a) if a else ()
    eff = tuple(la.primitive(la.vsum((la.scale(c, l) for c, l in zip(r, lin)), datum.dim)) for r in rows)
    inert = tuple(la.primitive(la.vsum((la.scale(c, l) for c, l in zip(r, lin)), datum.dim))
                  for r in la.nullspace(a, k)) if a else tuple(lin)
    return eff, inert


def solve_soliton(datum: SphericalDatum, tol: float = 1e-10, max_iter: int = 60) -> SolitonResult:
    """Damped Newton iteration for the vector field making the lineality pairings vanish."""
    n = datum.dim
    lin = datum.valuation.lineality_basis
    if not lin:
        return SolitonResult((0.0,) * n, 0.0, 0, True)
    eff, inert = effective_directions(datum)
    v0 = datum.delta_plus.vertices[0]
    for l in inert:
        if la.dot(la.sub(v0, datum.two_rho_p), l) != 0:
            raise DivergenceError(
                "the pairing with an inert lineality direction is nonzero, so no vector field "
                f"can cancel it (direction {la.fmt_vec(l)})")
    lin_f = np.array([[float(x) for x in l] for l in lin])
    E = np.array([[float(x) for x in e] for e in eff]).reshape(-1, n)
    vf = np.array([[float(x) for x in v] for v in datum.delta_plus.vertices])
    qtol = min(max(tol * 1e-3, 1e-14), 1e-10)
    base = datum.with_zeta(None)

    def evaluate(u):
        z = E.T @ u
        spread = float(np.ptp(vf @ (2 * z))) if len(vf) > 1 else 0.0
        if spread > MAX_EXPONENT_SPREAD or not np.all(np.isfinite(z)):
            raise DivergenceError(
                f"soliton iterates blew up (|zeta| = {np.linalg.norm(z):.3g}); the projection of "
                "2ρ_P is probably outside the relative interior of the projected polytope")
        return z, log_partition(base, z, qtol)

    def resid(lp):
        return float(np.abs(lin_f @ lp.gradient).max())

    u = np.zeros(len(E))
    z, lp = evaluate(u)
    trace = []
    for it in range(max_iter + 1):
        r = resid(lp)
        g = E @ lp.gradient
        H = E @ lp.hessian @ E.T
        eig = tuple(np.linalg.eigvalsh(lp.hessian).tolist())
        trace.append((tuple(z.tolist()), lp.value, r, eig))
        if r < tol or len(E) == 0:
            return SolitonResult(tuple(z.tolist()), r, it, True, tuple(trace))
        if it == max_iter:
            break
        try:
            step = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = -g
        slope = float(g @ step)
        if slope >= 0:
            step, slope = -g, -float(g @ g)
        t = 1.0
        while True:
            z_new, lp_new = evaluate(u + t * step)
            if lp_new.value <= lp.value + 1e-4 * t * slope or t < 1e-12:
                break
            t /= 2
        if t < 1e-12 and lp_new.value > lp.value + 1e-12 * abs(lp.value):
            # no decrease left at working precision; accept if gradient tiny
            break
        u = u + t * step
        z, lp = z_new, lp_new
    raise ConvergenceError(f"soliton solver did not converge in {max_iter} iterations "
                           f"(residual {resid(lp):.3g})")


def check_with_soliton(datum: SphericalDatum, tol: float = 1e-10, max_iter: int = 60
                       ) -> tuple[SolitonResult, Verdict]:
    """Solve for the soliton vector field, then return the verdict at that field."""
    sol = solve_soliton(datum, tol, max_iter)
    zeta = None if not any(sol.zeta) else sol.zeta
    v = check_kstability(datum.with_zeta(zeta), tol)
    return sol, replace(v, soliton=(sol.zeta, sol.residual))
