"""Polyhedral cones over the rationals.

A cone is stored as ``cone(rays) + span(lineality)``.  Duals are computed with
the double description method; membership in the dual of a valuation cone is
decided from sign conditions on its generators.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from .errors import InputError

MAX_DIM = 10


@dataclass(frozen=True)
class Cone:
    """``cone(rays) + span(lineality)`` with primitive integer generators."""

    dim: int
    rays: tuple
    lineality: tuple

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        """Exact membership of ``x`` (or relative-interior membership when ``strict``)."""
        dual = dual_cone(self.rays, self.lineality, dim=self.dim)
        x = la.vec(x)
        if any(la.dot(l, x) != 0 for l in dual.lineality):
            return False
        if strict:
            return all(la.dot(g, x) > 0 for g in dual.rays)
        return all(la.dot(g, x) >= 0 for g in dual.rays)


def _double_description(rows: Sequence[Sequence], n: int) -> tuple[list, list]:
    """Generators of {x in Q^n : a . x >= 0 for every row a}.

    Returns ``(rays, lineality)``; rays are extreme modulo the lineality space.
    """
    lin = [list(v) for v in la.identity(n)]
    rays: list[tuple] = []
    done: list[tuple] = []
    for a in rows:
        a = la.vec(a)
        if la.is_zero(a):
            continue
        k = next((i for i, l in enumerate(lin) if la.dot(a, l) != 0), None)
        if k is not None:
            l0 = tuple(lin.pop(k))
            s0 = la.dot(a, l0)
            if s0 < 0:
                l0, s0 = la.neg(l0), -s0
            lin = [la.sub(l, la.scale(la.dot(a, l) / s0, l0)) for l in lin]
            rays = [la.sub(r, la.scale(la.dot(a, r) / s0, l0)) for r in rays]
            rays.append(l0)
            done.append(a)
            continue
        vals = [la.dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        if not neg:
            done.append(a)
            continue
        zsets = [frozenset(j for j, b in enumerate(done) if la.dot(b, r) == 0) for r in rays]
        pointed_dim = n - len(lin)
        new = [rays[i] for i in pos + zero]
        for i in pos:
            for j in neg:
                common = zsets[i] & zsets[j]
                if len(common) < pointed_dim - 2:
                    continue
                if any(common <= zsets[m] for m in range(len(rays)) if m != i and m != j):
                    continue
                r = la.sub(la.scale(vals[i], rays[j]), la.scale(vals[j], rays[i]))
                new.append(la.primitive(r))
        rays = new
        done.append(a)
    out_rays: list[tuple] = []
    for r in rays:
        p = la.primitive(r)
        if not la.is_zero(p) and p not in out_rays:
            out_rays.append(p)
    out_lin = [la.primitive(v) for v in la.span_basis([tuple(l) for l in lin])]
    return out_rays, out_lin


def reduce_mod_lineality(v: Sequence, lineality: Sequence[Sequence]) -> tuple:
    """Primitive form of the component of ``v`` orthogonal to span(lineality)."""
    v = la.vec(v)
    if lineality:
        gram = [[la.dot(a, b) for b in lineality] for a in lineality]
        c = la.solve(gram, [la.dot(a, v) for a in lineality])
        for ci, a in zip(c, lineality):
            v = la.sub(v, la.scale(ci, a))
    return la.primitive(v)


def _check_dim(n: int) -> None:
    if n > MAX_DIM:
        raise InputError(f"cone computations are limited to dimension {MAX_DIM}, got {n}")


def _infer_dim(*groups) -> int:
    for g in groups:
        for v in g:
            return len(v)
    raise InputError("cannot infer the dimension of an empty generator set; pass dim")


def dual_cone(generators: Sequence[Sequence], lineality: Sequence[Sequence] = (),
              dim: int | None = None) -> Cone:
    """The dual {x : <x, g> >= 0 for all g in cone(generators) + span(lineality)}."""
    n = dim if dim is not None else _infer_dim(generators, lineality)
    _check_dim(n)
    gens = [la.vec(g) for g in generators]
    lin = [la.vec(l) for l in lineality]
    if any(len(v) != n for v in gens + lin):
        raise InputError("generators have inconsistent dimensions")
    rows = gens + lin + [la.neg(l) for l in lin]
    rays, lin_out = _double_description(rows, n)
    rays = sorted({reduce_mod_lineality(r, lin_out) for r in rays} - {la.zeros(n)})
    return Cone(n, tuple(rays), tuple(sorted(lin_out)))


def normalize_cone(generators: Sequence[Sequence], lineality: Sequence[Sequence] = (),
                   dim: int | None = None) -> Cone:
    """Irredundant description of ``cone(generators) + span(lineality)``."""
    n = dim if dim is not None else _infer_dim(generators, lineality)
    d = dual_cone(generators, lineality, dim=n)
    return dual_cone(d.rays, d.lineality, dim=n)


def lineality_space(generators: Sequence[Sequence], dim: int | None = None) -> tuple:
    """Basis of the largest subspace L with L and -L inside cone(generators)."""
    n = dim if dim is not None else _infer_dim(generators)
    d = dual_cone(generators, dim=n)
    return tuple(la.primitive(v) for v in la.span_basis(
        la.nullspace(list(d.rays) + list(d.lineality), n)))


@dataclass(frozen=True)
class ValuationConeData:
    """Generators of the lifted valuation cone in dual coordinates.

    ``rays`` and ``lineality_basis`` are normalized at construction: the true
    lineality space of the cone they generate becomes ``lineality_basis`` and
    rays lying in its span are dropped.
    """

    dim: int
    rays: tuple
    lineality_basis: tuple
    m_minus_basis: tuple

    @classmethod
    def build(cls, rays: Sequence[Sequence], lineality_basis: Sequence[Sequence],
              m_minus_basis: Sequence[Sequence], dim: int | None = None) -> "ValuationConeData":
        n = dim if dim is not None else _infer_dim(rays, lineality_basis, m_minus_basis)
        rays = [la.vec(r) for r in rays]
        lin = [la.vec(l) for l in lineality_basis]
        mm = [la.vec(m) for m in m_minus_basis]
        for name, group in (("rays", rays), ("lineality_basis", lin), ("m_minus_basis", mm)):
            for i, v in enumerate(group):
                if len(v) != n:
                    raise InputError(f"expected a vector of length {n}", f"/valuation/{name}/{i}")
                if la.is_zero(v):
                    raise InputError("zero generator", f"/valuation/{name}/{i}")
        if mm and la.rank(mm) != len(mm):
            raise InputError("m_minus_basis is linearly dependent", "/valuation/m_minus_basis")
        # the annihilator of M_- must be inside the linear part
        lin_full = list(lineality_space(rays + lin + [la.neg(l) for l in lin], dim=n))
        for v in la.nullspace(mm, n):
            if not la.in_span(v, lin_full):
                raise InputError("lineality must contain the annihilator of m_minus_basis "
                                 f"(missing {la.fmt_vec(v)})", "/valuation/lineality_basis")
        kept = []
        for r in rays:
            p = reduce_mod_lineality(r, lin_full)
            if la.is_zero(p) or p in kept:
                continue
            kept.append(p)
        return cls(n, tuple(kept), tuple(lin_full), tuple(mm))

    def generators(self) -> list[tuple[str, tuple]]:
        return [("ray", r) for r in self.rays] + [("lineality", l) for l in self.lineality_basis]

    def as_cone(self) -> Cone:
        return normalize_cone(self.rays, self.lineality_basis, dim=self.dim)

    def xi_cone(self) -> Cone:
        """Ξ, the dual of the valuation cone, on the character side."""
        return dual_cone(self.rays, self.lineality_basis, dim=self.dim)


@dataclass(frozen=True)
class MembershipResult:
    verdict: str  # inside_relint | on_boundary | outside
    violating_generator: tuple | None
    margins: tuple  # of (kind, generator, value)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def membership(point: Sequence, vc: ValuationConeData, strict: bool = True) -> MembershipResult:
    """Sign conditions of ``point`` against every generator of the valuation cone.

    The verdict is computed from the full sign pattern; ``strict`` only
    controls which generator is reported when the point is on the boundary
    (for the closed test a boundary point is not a violation).
    """
    if len(point) != vc.dim:
        raise InputError(f"point has length {len(point)}, cone lives in dimension {vc.dim}")
    margins = []
    outside = None
    boundary = None
    for kind, g in vc.generators():
        m = sum((x * y for x, y in zip(point, g)), Fraction(0) if _exact(point) else 0.0)
        margins.append((kind, g, m))
        if kind == "ray":
            if m < 0 and outside is None:
                outside = g
            elif m == 0 and boundary is None:
                boundary = g
        else:
            if m != 0 and outside is None:
                outside = g if m < 0 else la.neg(g)
    if outside is not None:
        verdict, witness = "outside", outside
    elif boundary is not None:
        verdict, witness = "on_boundary", boundary if strict else None
    else:
        verdict, witness = "inside_relint", None
    return MembershipResult(verdict, witness, tuple(margins))


def _exact(v) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in v)


def classify_point_in_cone(xi: Sequence, vc: ValuationConeData) -> str:
    """Where ``xi`` sits in the valuation cone: 'lineality', 'interior', 'face'.

    Raises :class:`InputError` if ``xi`` is not in the cone.
    """
    xi = la.vec(xi)
    if len(xi) != vc.dim:
        raise InputError("xi has the wrong dimension")
    cone = vc.as_cone()
    if not cone.contains(xi):
        raise InputError(f"{la.fmt_vec(xi)} is not in the valuation cone")
    if la.in_span(xi, vc.lineality_basis):
        return "lineality"
    if cone.contains(xi, strict=True):
        return "interior"
    return "face"
