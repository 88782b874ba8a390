"""Exact rational convex polytopes, possibly lower dimensional.

Everything downstream works in affine-hull coordinates: a point ``x`` of the
hull is ``base + sum_i y_i d_i`` where the direction basis ``d_i`` is the RREF
basis of the hull directions, so ``y_i`` is simply the entry of ``x - base``
at the i-th pivot column.  Volumes are measured in these coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, factorial, floor
from typing import Sequence

import numpy as np

from . import _linalg as la
from .cones import MAX_DIM, _double_description
from .errors import InputError


@dataclass(frozen=True)
class Simplex:
    vertices: tuple

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class MomentPolytope:
    ambient_dim: int
    vertices: tuple
    halfspaces: tuple          # (normal, offset): normal . x <= offset
    base_point: tuple
    direction_basis: tuple
    pivots: tuple
    equations: tuple = ()      # (normal, offset): normal . x == offset
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.direction_basis)

    @property
    def affine_hull(self) -> tuple:
        return self.base_point, self.direction_basis

    def to_hull(self, x: Sequence) -> tuple:
        """Hull coordinates of a point of the affine hull."""
        diff = la.sub(x, self.base_point)
        return tuple(diff[p] for p in self.pivots)

    def from_hull(self, y: Sequence) -> tuple:
        out = list(self.base_point)
        for c, d in zip(y, self.direction_basis):
            for i, x in enumerate(d):
                out[i] += c * x
        return tuple(out)

    def scaled(self, c) -> "MomentPolytope":
        c = la.frac(c)
        if c <= 0:
            raise InputError("scale must be positive")
        return from_vertices([la.scale(c, v) for v in self.vertices])

    def translated(self, t: Sequence) -> "MomentPolytope":
        return from_vertices([la.add(v, t) for v in self.vertices])

    def volume(self) -> Fraction:
        return sum((simplex_volume(self, s) for s in triangulate(self)), Fraction(0))


def _hull(points: list[tuple]) -> tuple[tuple, tuple, tuple]:
    base = points[0]
    dirs, pivots = la.rref([la.sub(p, base) for p in points[1:]]) if len(points) > 1 else ((), ())
    return base, dirs, pivots


def from_vertices(points: Sequence[Sequence]) -> MomentPolytope:
    """Convex hull of ``points``; redundant points are dropped."""
    pts = []
    for p in points:
        v = la.vec(p)
        if v not in pts:
            pts.append(v)
    if not pts:
        raise InputError("a polytope needs at least one point", "/polytope/vertices")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise InputError("points have inconsistent dimensions", "/polytope/vertices")
    if n > MAX_DIM:
        raise InputError(f"ambient dimension {n} exceeds {MAX_DIM}")
    base, dirs, pivots = _hull(pts)
    d = len(dirs)
    ys = [tuple(la.sub(p, base)[c] for c in pivots) for p in pts]
    if d == 0:
        facets_h = []
    else:
        # facets of conv(ys): cone {(a, b) : a.y + b >= 0 for all y}
        rays, lin = _double_description([y + (Fraction(1),) for y in ys], d + 1)
        if lin:
            raise AssertionError("full-dimensional point set gave a non-pointed facet cone")
        facets_h = [r for r in rays if not la.is_zero(r[:d])]
    verts = []
    for y, p in zip(ys, pts):
        tight = [f[:d] for f in facets_h if la.dot(f[:d], y) + f[d] == 0]
        if d == 0 or la.rank(tight) == d:
            verts.append(p)
    verts.sort()
    # hull inequalities a.y + b >= 0 become ambient (-a~).x <= b + ..., with a~ on pivots
    halfspaces = []
    for f in facets_h:
        a, b = f[:d], f[d]
        normal = [Fraction(0)] * n
        for c, ai in zip(pivots, a):
            normal[c] = -ai
        normal = tuple(normal)
        halfspaces.append((normal, b + la.dot(normal, base)))
    equations = []
    for eq in la.nullspace(dirs, n) if dirs else la.identity(n):
        eq = la.primitive(eq)
        equations.append((eq, la.dot(eq, base)))
    base = verts[0]
    _, dirs, pivots = _hull(verts)
    return MomentPolytope(n, tuple(verts), tuple(sorted(halfspaces)), base, tuple(dirs),
                          tuple(pivots), tuple(equations))


def from_halfspaces(ineqs: Sequence[tuple]) -> MomentPolytope:
    """Polytope {x : normal . x <= offset}; must be nonempty and bounded."""
    rows = []
    n = None
    for i, (normal, offset) in enumerate(ineqs):
        a = la.vec(normal)
        if n is None:
            n = len(a)
        elif len(a) != n:
            raise InputError("inconsistent normal lengths", f"/polytope/halfspaces/{i}")
        rows.append(la.neg(a) + (la.frac(offset),))
    if n is None:
        raise InputError("no inequalities given", "/polytope/halfspaces")
    if n > MAX_DIM:
        raise InputError(f"ambient dimension {n} exceeds {MAX_DIM}")
    t_row = la.zeros(n) + (Fraction(1),)
    rays, lin = _double_description(rows + [t_row], n + 1)
    if lin:
        raise InputError("the inequality system is unbounded", "/polytope/halfspaces")
    pts = []
    for r in rays:
        if r[n] == 0:
            raise InputError("the inequality system is unbounded", "/polytope/halfspaces")
        pts.append(tuple(x / r[n] for x in r[:n]))
    if not pts:
        raise InputError("the inequality system is infeasible", "/polytope/halfspaces")
    return from_vertices(pts)


def contains(p: MomentPolytope, x: Sequence, mode: str = "closed") -> bool:
    if len(x) != p.ambient_dim:
        raise InputError(f"point has length {len(x)}, polytope lives in dimension {p.ambient_dim}")
    x = la.vec(x)
    if any(la.dot(e, x) != b for e, b in p.equations):
        return False
    if mode == "closed":
        return all(la.dot(a, x) <= b for a, b in p.halfspaces)
    if mode == "relative_interior":
        return all(la.dot(a, x) < b for a, b in p.halfspaces)
    raise InputError(f"unknown containment mode {mode!r}")


def _facets_of(p_verts: list[tuple], d: int) -> list[list[tuple]]:
    """Vertex sets of the facets of a full-dimensional point set in Q^d."""
    rays, _ = _double_description([y + (Fraction(1),) for y in p_verts], d + 1)
    out = []
    for f in rays:
        if la.is_zero(f[:d]):
            continue
        out.append([y for y in p_verts if la.dot(f[:d], y) + f[d] == 0])
    return out


def _pull(verts: list[tuple], d: int) -> list[tuple]:
    """Pulling triangulation of conv(verts) (full-dimensional in its own hull)."""
    verts = sorted(verts)
    if d == 0:
        return [(verts[0],)]
    apex = verts[0]
    if len(verts) == d + 1:
        return [tuple(verts)]
    out = []
    # facets are computed in the hull of verts (dimension d) in local coordinates
    base, dirs, pivots = _hull(verts)
    local = {v: tuple(la.sub(v, base)[c] for c in pivots) for v in verts}
    back = {loc: v for v, loc in local.items()}
    for facet in _facets_of(list(local.values()), d):
        fv = [back[y] for y in facet]
        if apex in fv:
            continue
        for s in _pull(fv, d - 1):
            out.append((apex,) + s)
    return out


def triangulate(p: MomentPolytope) -> tuple:
    """Simplices of a pulling triangulation from the lexicographically least vertex."""
    cached = p._cache.get("triangulation")
    if cached is None:
        cached = tuple(Simplex(tuple(s)) for s in _pull(list(p.vertices), p.dim))
        p._cache["triangulation"] = cached
    return cached


def simplex_volume(p: MomentPolytope, s: Simplex) -> Fraction:
    """Volume of ``s`` in the hull coordinates of ``p``."""
    d = s.dim
    if d == 0:
        return Fraction(1)
    v0 = p.to_hull(s.vertices[0])
    edges = [la.sub(p.to_hull(v), v0) for v in s.vertices[1:]]
    return abs(la.det(edges)) / factorial(d)


def lattice_grid(p: MomentPolytope, scale: int, lattice_basis: Sequence[Sequence],
                 base_point: Sequence) -> tuple[tuple, tuple, np.ndarray]:
    """Integer coordinates of ``(scale*base_point + lattice) ∩ scale*p``.

    Returns ``(origin, basis, coords)`` with each point equal to
    ``origin + sum_i coords[j, i] * basis[i]``; ``coords`` is an int64 array of
    shape (N, len(basis)) in lexicographic order.
    """
    if isinstance(scale, bool) or not isinstance(scale, (int, np.integer)) or scale < 1:
        raise InputError("scale must be a positive integer")
    scale = int(scale)
    n = p.ambient_dim
    basis = tuple(la.vec(b) for b in lattice_basis)
    if any(len(b) != n for b in basis):
        raise InputError("lattice basis has the wrong dimension")
    if basis and la.rank(basis) != len(basis):
        raise InputError("lattice basis is linearly dependent")
    for d in p.direction_basis:
        if not la.in_span(d, basis):
            raise InputError("lattice basis does not span the polytope's directions")
    origin = la.scale(scale, la.vec(base_point))
    m = len(basis)
    coords = []
    for v in p.vertices:
        c = la.coordinates(la.sub(la.scale(scale, v), origin), basis)
        if c is None:
            # the coset's affine span misses the polytope
            return origin, basis, np.zeros((0, m), dtype=np.int64)
        coords.append(c)
    if m == 0:
        found = contains(p.scaled(scale), origin)
        return origin, basis, np.zeros((1 if found else 0, 0), dtype=np.int64)
    lo = [floor(min(c[i] for c in coords)) for i in range(m)]
    hi = [ceil(max(c[i] for c in coords)) for i in range(m)]
    # a.(origin + B^T c) <= scale*b  <=>  (B a).c <= scale*b - a.origin
    cons = [(a, scale * b - la.dot(a, origin), False) for a, b in p.halfspaces]
    cons += [(a, scale * b - la.dot(a, origin), True) for a, b in p.equations]
    axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)]
    grid = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    bound = max(max(abs(l), abs(h)) for l, h in zip(lo, hi)) + 1
    mask = np.ones(len(grid), dtype=bool)
    for a, rhs, is_eq in cons:
        coef = [la.dot(bv, a) for bv in basis]
        den = la.denominator_lcm(coef + [rhs])
        ci = [int(x * den) for x in coef]
        r = int(rhs * den)
        if max(abs(x) for x in ci) * bound * m < 2**62:
            lhs = grid @ np.array(ci, dtype=np.int64)
        else:
            lhs = grid.astype(object) @ np.array(ci, dtype=object)
        mask &= (lhs == r) if is_eq else (lhs <= r)
    return origin, basis, grid[mask]


def lattice_points(p: MomentPolytope, scale: int, lattice_basis: Sequence[Sequence],
                   base_point: Sequence) -> list[tuple]:
    """Points of ``(scale*base_point + lattice) ∩ scale*p``, sorted.

    The lattice basis must be linearly independent and its span must contain
    the direction space of ``p``.
    """
    origin, basis, coords = lattice_grid(p, scale, lattice_basis, base_point)
    out = []
    for c in coords.tolist():
        pt = list(origin)
        for ci, b in zip(c, basis):
            if ci:
                for j, x in enumerate(b):
                    pt[j] += ci * x
        out.append(tuple(pt))
    out.sort()
    return out


def shoelace_area(points: Sequence[Sequence]) -> Fraction:
    """Area of a planar polygon whose vertices are given in cyclic order."""
    pts = [la.vec(q) for q in points]
    s = Fraction(0)
    for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def vertices_in_cyclic_order(p: MomentPolytope) -> list[tuple]:
    """Vertices of a 2-dimensional polytope sorted by angle about the centroid."""
    if p.dim != 2:
        raise InputError("cyclic order is defined for polygons only")
    ys = [p.to_hull(v) for v in p.vertices]
    cx = sum(y[0] for y in ys) / len(ys)
    cy = sum(y[1] for y in ys) / len(ys)
    order = sorted(range(len(ys)), key=lambda i: np.arctan2(float(ys[i][1] - cy), float(ys[i][0] - cx)))
    return [p.vertices[i] for i in order]


__all__ = [
    "MomentPolytope", "Simplex", "from_vertices", "from_halfspaces", "contains",
    "triangulate", "simplex_volume", "lattice_points", "shoelace_area",
    "vertices_in_cyclic_order", "lattice_grid",
]
