import random
from fractions import Fraction

import pytest

from oracles import scan_lattice_points, shoelace
from sphkstab import _linalg as la
from sphkstab.errors import InputError
from sphkstab.polytope import (
    contains,
    from_halfspaces,
    from_vertices,
    lattice_points,
    simplex_volume,
    triangulate,
)

PENTAGON = [(2, -1), (2, -2), (1, -2), (Fraction(-1, 2), Fraction(-1, 2)), (Fraction(1, 2), Fraction(1, 2))]
SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_segment():
    p = from_vertices([(0,), (4,)])
    assert p.dim == 1
    assert p.vertices == ((0,), (4,))


def test_interior_point_dropped():
    p = from_vertices([(0, 0), (1, 0), (0, 1), (Fraction(1, 2), Fraction(1, 4))])
    assert len(p.vertices) == 3 and p.dim == 2


def test_pentagon_keeps_five_vertices():
    p = from_vertices(PENTAGON)
    assert set(p.vertices) == {la.vec(v) for v in PENTAGON}


def test_empty_input():
    with pytest.raises(InputError):
        from_vertices([])


def test_halfspace_square():
    p = from_halfspaces([((-1, 0), 0), ((0, -1), 0), ((1, 0), 1), ((0, 1), 1)])
    assert set(p.vertices) == {la.vec(v) for v in SQUARE}


def test_halfspace_degenerate_segment():
    p = from_halfspaces([((-1, 0), 0), ((1, 0), 0), ((0, -1), 1), ((0, 1), 1)])
    assert p.dim == 1
    assert set(p.vertices) == {(0, -1), (0, 1)}


def test_halfspace_errors():
    with pytest.raises(InputError, match="unbounded"):
        from_halfspaces([((-1, 0), 0), ((0, -1), 0)])
    with pytest.raises(InputError, match="infeasible"):
        from_halfspaces([((1, 0), -1), ((-1, 0), -1), ((0, 1), 1), ((0, -1), 1)])


def test_random_3d_halfspaces_by_substitution():
    rng = random.Random(3)
    for _ in range(30):
        ineqs = [((1, 0, 0), 3), ((-1, 0, 0), 3), ((0, 1, 0), 3), ((0, -1, 0), 3),
                 ((0, 0, 1), 3), ((0, 0, -1), 3)]
        for _ in range(rng.randint(1, 5)):
            a = tuple(rng.randint(-3, 3) for _ in range(3))
            if any(a):
                ineqs.append((a, rng.randint(1, 6)))
        p = from_halfspaces(ineqs)
        assert p.dim == 3
        for v in p.vertices:
            vals = [la.dot(a, v) - b for a, b in ineqs]
            assert all(x <= 0 for x in vals)
            tight = [la.vec(a) for (a, b), x in zip(ineqs, vals) if x == 0]
            assert la.rank(tight) == 3


def test_round_trip_through_halfspaces():
    rng = random.Random(4)
    for _ in range(30):
        n = rng.randint(1, 3)
        pts = [tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n))
               for _ in range(rng.randint(n + 1, n + 6))]
        p = from_vertices(pts)
        if p.dim < n:
            continue
        q = from_halfspaces(p.halfspaces)
        assert set(q.vertices) == set(p.vertices)


def test_triangulate_square():
    p = from_vertices(SQUARE)
    simplices = triangulate(p)
    assert len(simplices) == 2
    assert all(simplex_volume(p, s) == Fraction(1, 2) for s in simplices)


def test_triangulate_segment_and_point():
    seg = from_vertices([(0,), (4,)])
    assert [s.vertices for s in triangulate(seg)] == [((0,), (4,))]
    pt = from_vertices([(1, 2)])
    assert len(triangulate(pt)) == 1 and pt.volume() == 1


def test_pentagon_volume_matches_shoelace():
    p = from_vertices(PENTAGON)
    assert p.volume() == shoelace(PENTAGON)


def test_random_polygons_volume_matches_shoelace():
    rng = random.Random(9)
    for _ in range(40):
        pts = [(Fraction(rng.randint(-9, 9), rng.randint(1, 4)), Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
               for _ in range(rng.randint(3, 9))]
        p = from_vertices(pts)
        if p.dim < 2:
            continue
        assert p.volume() == shoelace(p.vertices)


def test_triangulation_3d_cube():
    cube = from_vertices([(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 2)])
    assert cube.volume() == 2
    assert all(s.dim == 3 for s in triangulate(cube))


def test_contains_examples():
    sq = from_vertices(SQUARE)
    half = Fraction(1, 2)
    assert contains(sq, (half, half), "relative_interior")
    assert not contains(sq, (1, half), "relative_interior")
    assert contains(sq, (1, half), "closed")
    seg = from_vertices([(0, 0), (2, 2)])
    assert contains(seg, (1, 1), "relative_interior")
    assert not contains(seg, (1, 0), "closed")
    with pytest.raises(InputError):
        contains(sq, (1,))


def test_vertices_are_contained(catalog_data):
    for datum in catalog_data.values():
        p = datum.delta_plus
        assert all(contains(p, v) for v in p.vertices)


def test_lattice_points_segment():
    seg = from_vertices([(0,), (4,)])
    assert lattice_points(seg, 1, [(1,)], (0,)) == [(i,) for i in range(5)]
    assert lattice_points(seg, 2, [(1,)], (0,)) == [(i,) for i in range(9)]


def test_lattice_points_pentagon_scan():
    p = from_vertices(PENTAGON)
    got = lattice_points(p, 3, la.identity(2), (1, -1))
    assert got == scan_lattice_points(PENTAGON, 3, (1, -1), la.identity(2))
    assert len(got) > 0


def test_lattice_basis_must_span():
    p = from_vertices(PENTAGON)
    with pytest.raises(InputError):
        lattice_points(p, 1, [(1, 0)], (0, 0))


def test_lattice_counts_on_catalog_polytopes(catalog_data):
    for name, datum in catalog_data.items():
        p = datum.delta_plus
        basis = datum.valuation.m_minus_basis
        for k in range(1, 6):
            got = lattice_points(p, k, basis, datum.two_rho_p)
            if p.ambient_dim == 2:
                assert got == scan_lattice_points(p.vertices, k, datum.two_rho_p, basis), name
            else:
                b = basis[0][0]
                lo, hi = k * p.vertices[0][0], k * p.vertices[-1][0]
                start = k * datum.two_rho_p[0]
                want = [(start + i * b,) for i in range(-1000, 1000) if lo <= start + i * b <= hi]
                assert got == sorted(want), name
