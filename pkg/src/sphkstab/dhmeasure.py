"""Moments of the density  exp(c0 + c.p) * prod_L (L . p)  over a polytope.

Two paths:

* exact: the polynomial factor is expanded in barycentric coordinates on each
  simplex of a triangulation and integrated monomial by monomial with
  ``∫ λ^a = d! vol ∏ a_i! / (d + |a|)!``.  Everything stays rational.
* quadrature: collapsed (Duffy) Gauss-Jacobi rules on each simplex; the order
  is raised until two consecutive orders agree, and the gap becomes the error
  certificate.

Masses are measured in affine-hull coordinates of the polytope (see
:mod:`sphkstab.polytope`); barycenters do not depend on that normalization.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np
from scipy.special import roots_jacobi

from . import _linalg as la
from .errors import ConvergenceError, DegenerateInputError, InputError
from .polytope import MomentPolytope, Simplex, simplex_volume, triangulate

EPS = np.finfo(float).eps
MAX_ORDER = 160


@dataclass(frozen=True)
class DHDensity:
    """Polynomial part ``prod L.p`` times ``exp(exp_constant + exp_coefficient . p)``."""

    linear_forms: tuple
    exp_coefficient: tuple = ()
    exp_constant: float = 0.0

    @property
    def is_polynomial(self) -> bool:
        return all(c == 0 for c in self.exp_coefficient)

    @classmethod
    def from_zeta(cls, forms: Sequence[Sequence], four_rho_p: Sequence, zeta: Sequence | None):
        """Density e^{<4ρ_P - 2p, ζ>} ∏ L.p for a dual vector ζ (None means 0)."""
        forms = tuple(la.vec(f) for f in forms)
        if zeta is None:
            return cls(forms, (), 0.0)
        z = [float(x) for x in zeta]
        return cls(forms, tuple(-2.0 * x for x in z),
                   float(sum(float(a) * b for a, b in zip(four_rho_p, z))))

    def evaluate(self, x: Sequence) -> float:
        val = 1.0
        for f in self.linear_forms:
            val *= float(la.dot(f, x)) if _exact(x) else sum(float(a) * b for a, b in zip(f, x))
        if self.exp_coefficient:
            val *= math.exp(self.exp_constant + sum(c * float(v) for c, v in zip(self.exp_coefficient, x)))
        return val


def _exact(x) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in x)


@dataclass(frozen=True)
class Moments:
    """``mass``, ``first`` (vector) and ``second`` (matrix) moments.

    The true values are these times ``exp(log_scale)``; ``error_bound`` bounds the error of ``mass`` in the same units and
    ``rel_error`` is the relative disagreement between the last two orders.
    """

    mass: object
    first: tuple
    second: tuple | None
    error_bound: float = 0.0
    rel_error: float = 0.0
    log_scale: float = 0.0
    order: int = 0

    @property
    def exact(self) -> bool:
        return isinstance(self.mass, Fraction) and self.error_bound == 0

    def barycenter(self) -> tuple:
        if self.mass == 0:
            raise DegenerateInputError("the density vanishes identically on the polytope")
        return tuple(x / self.mass for x in self.first)

    def covariance(self) -> tuple:
        b = self.barycenter()
        n = len(b)
        return tuple(tuple(self.second[i][j] / self.mass - b[i] * b[j] for j in range(n))
                     for i in range(n))


def check_forms_nonnegative(p: MomentPolytope, forms: Sequence[Sequence]) -> bool:
    """Warn (and return False) if some form is negative at a vertex."""
    ok = all(la.dot(f, v) >= 0 for f in forms for v in p.vertices)
    if not ok:
        warnings.warn("density has a negative linear factor on the polytope", stacklevel=3)
    return ok


# exact path

def _poly_mul_linear(poly: dict, coeffs: Sequence[Fraction]) -> dict:
    out: dict = {}
    for exps, c in poly.items():
        for i, a in enumerate(coeffs):
            if a == 0:
                continue
            e = list(exps)
            e[i] += 1
            e = tuple(e)
            out[e] = out.get(e, 0) + c * a
    return out


def _simplex_moments_exact(args) -> tuple:
    verts, vol, forms, want_second = args
    d = len(verts) - 1
    n = len(verts[0])
    poly = {tuple([0] * (d + 1)): Fraction(1)}
    for f in forms:
        poly = _poly_mul_linear(poly, [la.dot(f, v) for v in verts])
    scale = factorial(d) * vol

    def integral(exps) -> Fraction:
        num = 1
        for a in exps:
            num *= factorial(a)
        return scale * Fraction(num, factorial(d + sum(exps)))

    i0 = Fraction(0)
    i1 = [Fraction(0)] * (d + 1)
    i2 = [[Fraction(0)] * (d + 1) for _ in range(d + 1)]
    for exps, c in poly.items():
        i0 += c * integral(exps)
        for i in range(d + 1):
            e = list(exps)
            e[i] += 1
            i1[i] += c * integral(e)
            if want_second:
                for j in range(i, d + 1):
                    e2 = list(e)
                    e2[j] += 1
                    i2[i][j] += c * integral(e2)
    first = la.vsum((la.scale(i1[i], verts[i]) for i in range(d + 1)), n)
    second = None
    if want_second:
        sec = [[Fraction(0)] * n for _ in range(n)]
        for i in range(d + 1):
            for j in range(i, d + 1):
                w = i2[i][j]
                for a in range(n):
                    for b in range(n):
                        x = verts[i][a] * verts[j][b]
                        if i != j:
                            x += verts[j][a] * verts[i][b]
                        sec[a][b] += w * x
        second = tuple(tuple(r) for r in sec)
    return i0, first, second


def _workers(requested: int | None) -> int:
    cap = os.environ.get("SPHKSTAB_MAX_WORKERS")
    w = requested if requested is not None else 1
    if cap:
        try:
            w = min(w, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, w)


def simplex_moments_exact(p: MomentPolytope, s: Simplex, forms: Sequence[Sequence],
                          second: bool = True) -> Moments:
    """Exact moments over a single simplex of ``p``'s triangulation."""
    m, f, sec = _simplex_moments_exact((s.vertices, simplex_volume(p, s), tuple(forms), second))
    return Moments(m, f, sec)


def moments_polynomial_exact(p: MomentPolytope, forms: Sequence[Sequence], second: bool = True,
                             workers: int | None = None) -> Moments:
    """Exact rational moments of ``prod L.p`` over ``p``."""
    forms = tuple(la.vec(f) for f in forms)
    n = p.ambient_dim
    if any(len(f) != n for f in forms):
        raise InputError("density forms and polytope have different dimensions")
    jobs = [(s.vertices, simplex_volume(p, s), forms, second) for s in triangulate(p)]
    w = _workers(workers)
    if w > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=w) as ex:
            parts = list(ex.map(_simplex_moments_exact, jobs))
    else:
        parts = [_simplex_moments_exact(j) for j in jobs]
    mass = sum((m for m, _, _ in parts), Fraction(0))
    first = la.vsum((f for _, f, _ in parts), n)
    sec = None
    if second:
        sec = tuple(tuple(sum((s[i][j] for _, _, s in parts), Fraction(0)) for j in range(n))
                    for i in range(n))
    return Moments(mass, first, sec)


# quadrature path

_RULES: dict = {}


def _jacobi_rule(order: int, alpha: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi rule on [0,1] for the weight (1-t)^alpha."""
    key = (order, alpha)
    if key not in _RULES:
        s, w = roots_jacobi(order, alpha, 0)
        _RULES[key] = ((1 + s) / 2, w / 2 ** (alpha + 1))
    return _RULES[key]


def _collapsed_rule(d: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Barycentric points (N, d+1) and weights summing to 1/d! on the unit simplex."""
    if d == 0:
        return np.ones((1, 1)), np.ones(1)
    ts, ws = zip(*(_jacobi_rule(order, d - k) for k in range(1, d + 1)))
    grids = np.meshgrid(*ts, indexing="ij")
    wgrids = np.meshgrid(*ws, indexing="ij")
    t = np.stack([g.ravel() for g in grids], axis=1)
    w = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    lam = np.empty((t.shape[0], d + 1))
    rest = np.ones(t.shape[0])
    for k in range(d):
        lam[:, k + 1] = rest * t[:, k]
        rest = rest * (1 - t[:, k])
    lam[:, 0] = rest
    return lam, w


def _quadrature(p: MomentPolytope, forms: np.ndarray, c: np.ndarray, shift: float,
                order: int) -> tuple[float, np.ndarray, np.ndarray]:
    n = p.ambient_dim
    d = p.dim
    lam, w = _collapsed_rule(d, order)
    mass = 0.0
    first = np.zeros(n)
    second = np.zeros((n, n))
    for s in triangulate(p):
        verts = np.array([[float(x) for x in v] for v in s.vertices])
        vol = float(simplex_volume(p, s)) * factorial(d)
        x = lam @ verts
        val = np.exp(x @ c - shift)
        if len(forms):
            val = val * np.prod(x @ forms.T, axis=1)
        wv = w * val * vol
        mass += wv.sum()
        first += wv @ x
        second += (x * wv[:, None]).T @ x
    return mass, first, second


def _exponent_is_constant(p: MomentPolytope, coeff: Sequence[float]) -> bool:
    """True if ``coeff . x`` does not vary along the affine hull of ``p``."""
    c = [float(x) for x in coeff]
    # below ~eps the exponent cannot change a double-precision density
    scale = max(sum(abs(x) for x in c), 1.0)
    for d in p.direction_basis:
        dn = sum(abs(float(x)) for x in d)
        if abs(sum(a * float(b) for a, b in zip(c, d))) > 8 * EPS * scale * dn:
            return False
    return True


def moments_exponential(p: MomentPolytope, density: DHDensity, tol: float = 1e-10,
                        second: bool = True, force_quadrature: bool = False,
                        max_order: int = MAX_ORDER) -> Moments:
    """Moments of the full density with an escalation-based error certificate."""
    if tol <= 0:
        raise InputError("tol must be positive")
    if density.is_polynomial and not force_quadrature:
        return moments_polynomial_exact(p, density.linear_forms, second=second)
    if not force_quadrature and _exponent_is_constant(p, density.exp_coefficient):
        m = moments_polynomial_exact(p, density.linear_forms, second=second)
        v0 = p.vertices[0]
        const = density.exp_constant + sum(c * float(x) for c, x in zip(density.exp_coefficient, v0))
        return replace(m, log_scale=const)
    n = p.ambient_dim
    forms = np.array([[float(x) for x in f] for f in density.linear_forms]).reshape(-1, n)
    c = np.array([float(x) for x in density.exp_coefficient] or [0.0] * n)
    vf = np.array([[float(x) for x in v] for v in p.vertices])
    vals = vf @ c
    shift = float(vals.max())
    radius = float(np.abs(vf).max()) or 1.0
    spread = float(vals.max() - vals.min())
    order = max(2, (len(forms) + 4) // 2 + 1, int(math.ceil(spread / 2)) + 2)
    prev = _quadrature(p, forms, c, shift, order)
    while True:
        nxt_order = order + max(2, order // 4)
        if nxt_order > max_order:
            raise ConvergenceError(
                f"quadrature did not reach relative accuracy {tol:g} by order {max_order}; "
                "the exponent may be too large for this polytope")
        cur = _quadrature(p, forms, c, shift, nxt_order)
        m0, f0, s0 = prev
        m1, f1, s1 = cur
        if m1 <= 0:
            raise DegenerateInputError("the density vanishes identically on the polytope")
        rel = max(abs(m1 - m0) / m1,
                  float(np.abs(f1 - f0).max()) / (m1 * radius),
                  float(np.abs(s1 - s0).max()) / (m1 * radius ** 2) if second else 0.0)
        order = nxt_order
        if rel <= tol / 4:
            break
        prev = cur
    rel = max(rel, 32 * EPS)
    return Moments(
        mass=float(m1),
        first=tuple(float(x) for x in f1),
        second=tuple(tuple(float(x) for x in r) for r in s1) if second else None,
        error_bound=rel * float(m1),
        rel_error=rel,
        log_scale=shift + density.exp_constant,
        order=order,
    )


def barycenter(p: MomentPolytope, density: DHDensity | Sequence, tol: float = 1e-10
               ) -> tuple[tuple, float]:
    """Barycenter of ``p`` and an error bound (0 in the exact path).

    ``density`` may also be a bare list of linear forms.
    """
    if not isinstance(density, DHDensity):
        density = DHDensity(tuple(la.vec(f) for f in density))
    m = moments_exponential(p, density, tol, second=False)
    return m.barycenter(), barycenter_error(p, m)


def barycenter_error(p: MomentPolytope, m: Moments) -> float:
    """Sup-norm bound on the barycenter error implied by the moment certificate."""
    if m.exact:
        return 0.0
    radius = max(float(max(abs(x) for x in v)) for v in p.vertices) or 1.0
    return 2.0 * radius * m.rel_error
