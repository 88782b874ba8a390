"""Quantized barycenters: Weyl-dimension weighted sums over dilated lattice points.

At level ``k`` the points are ``λ ∈ (k·2ρ_P + M_-) ∩ kΔ⁺`` with weight
``dim V_λ · exp(<4ρ_P - 2λ/k, ζ>)``; the weighted mean of ``λ/k`` converges
to the continuous barycenter as ``k → ∞``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _linalg as la
from .errors import DegenerateInputError, InputError
from .kstab import SphericalDatum
from .polytope import lattice_grid
from .rootsys import weyl_dimension

__all__ = ["QuantizedSample", "quantized_barycenter", "quantized_futaki", "weyl_dimension"]


@dataclass(frozen=True)
class QuantizedSample:
    level: int
    weighted_mass: object       # Fraction, or float times exp(log_scale)
    weighted_moment: tuple
    q_barycenter: tuple
    count: int
    exact: bool = True
    log_scale: float = 0.0


def _integer_affine(values_at_origin: Fraction, steps: Sequence[Fraction], coords: np.ndarray):
    """Exact values ``values_at_origin + coords @ steps`` as (Python-int array, denominator)."""
    den = la.denominator_lcm([values_at_origin, *steps])
    base = int(values_at_origin * den)
    out = np.full(len(coords), base, dtype=object)
    for i, s in enumerate(steps):
        si = int(s * den)
        if si:
            out = out + coords[:, i].astype(object) * si
    return out, den


def quantized_barycenter(datum: SphericalDatum, k: int, lattice_basis: Sequence[Sequence] | None = None,
                         base_point: Sequence | None = None) -> QuantizedSample:
    """Weighted mean of ``λ/k`` over the level-``k`` lattice points."""
    basis = datum.valuation.m_minus_basis if lattice_basis is None else tuple(la.vec(b) for b in lattice_basis)
    base = datum.two_rho_p if base_point is None else la.vec(base_point)
    if len(base) != datum.dim:
        raise InputError("base point has the wrong dimension", "/options/base_point")
    origin, basis, coords = lattice_grid(datum.delta_plus, k, basis, base)
    if len(coords) == 0:
        raise DegenerateInputError(f"no lattice points at level {k}")
    rs = datum.root_system
    # dim V_λ restricted to the roots that matter: prod κ(λ+ρ, α)/κ(ρ, α)
    weight = np.full(len(coords), 1, dtype=object)
    scale = Fraction(1)
    for alpha in datum.phi_p:
        lf = rs.linear_form(alpha)
        vals, den = _integer_affine(la.dot(lf, la.add(origin, rs.rho)),
                                    [la.dot(lf, b) for b in basis], coords)
        weight = weight * vals
        scale /= den * la.dot(lf, rs.rho)
    # moments of λ: λ_j = origin_j + Σ_i c_i b_ij
    sums_c = [int(np.sum(weight * coords[:, i].astype(object))) if len(basis) else 0
              for i in range(len(basis))]
    total = int(np.sum(weight))
    n = datum.dim
    if datum.zeta_is_zero:
        mass = scale * total
        moment = [origin[j] * total + sum((sums_c[i] * basis[i][j] for i in range(len(basis))), Fraction(0))
                  for j in range(n)]
        moment = tuple(scale * x / k for x in moment)
        return QuantizedSample(k, mass, moment, tuple(x / mass for x in moment), len(coords), True)
    zeta = np.array([float(x) for x in datum.zeta_lift])
    pts = np.array([[float(x) for x in origin]]) + coords.astype(float) @ np.array(
        [[float(x) for x in b] for b in basis]).reshape(len(basis), n)
    four_rho = np.array([2.0 * float(x) for x in datum.two_rho_p])
    expo = float(four_rho @ zeta) - 2.0 * (pts / k) @ zeta
    shift = float(expo.max())
    w = np.array([float(x) for x in weight]) * np.exp(expo - shift)
    mass = math.fsum(w)
    moment = tuple(math.fsum(w * pts[:, j] / k) for j in range(n))
    return QuantizedSample(k, mass * float(scale), tuple(x * float(scale) for x in moment),
                           tuple(x / mass for x in moment), len(coords), False, shift)


def quantized_futaki(datum: SphericalDatum, k: int, xi_lift: Sequence, **kwargs):
    """``<q_bar(k) - 2ρ_P, ξ>``; exact when ζ is zero."""
    if len(xi_lift) != datum.dim:
        raise InputError(f"xi has length {len(xi_lift)}, expected {datum.dim}")
    s = quantized_barycenter(datum, k, **kwargs)
    if s.exact:
        return la.dot(la.sub(s.q_barycenter, datum.two_rho_p), la.vec(xi_lift))
    return sum((b - float(t)) * float(x) for b, t, x in zip(s.q_barycenter, datum.two_rho_p, xi_lift))
