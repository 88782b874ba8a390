import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from oracles import X, Y, sympy_polygon_barycenter
from sphkstab import _linalg as la
from sphkstab.dhmeasure import (
    DHDensity,
    barycenter,
    moments_exponential,
    moments_polynomial_exact,
    simplex_moments_exact,
)
from sphkstab.errors import DegenerateInputError
from sphkstab.polytope import contains, from_vertices, triangulate

PENTAGON = [(2, -1), (2, -2), (1, -2), (Fraction(-1, 2), Fraction(-1, 2)), (Fraction(1, 2), Fraction(1, 2))]
GL2_FORMS = [(1, -1), (1, -1)]


def test_segment_example():
    m = moments_polynomial_exact(from_vertices([(0,), (4,)]), [(1,)])
    assert m.mass == 8 and m.first == (Fraction(64, 3),)
    assert m.barycenter() == (Fraction(8, 3),)


def test_unit_triangle_uniform():
    m = moments_polynomial_exact(from_vertices([(0, 0), (1, 0), (0, 1)]), [])
    assert m.mass == Fraction(1, 2)
    assert m.first == (Fraction(1, 6), Fraction(1, 6))


def test_gl2_pentagon_exact_barycenter():
    bar, err = barycenter(from_vertices(PENTAGON), GL2_FORMS)
    assert bar == (Fraction(2343, 1750), Fraction(-2343, 1750))
    assert err == 0


def test_p2_barycenter_is_four_rho():
    bar, _ = barycenter(from_vertices([(0,), (6,)]), [(1,)])
    assert bar == (4,)


def test_point_barycenter():
    bar, _ = barycenter(from_vertices([(3, Fraction(1, 2))]), [(1, 1)])
    assert bar == (3, Fraction(1, 2))


def test_zero_mass_raises():
    with pytest.raises(DegenerateInputError):
        barycenter(from_vertices([(1, 1), (2, 2)]), [(1, -1)])


def test_zero_exponent_reduces_to_exact():
    p = from_vertices(PENTAGON)
    d = DHDensity.from_zeta(GL2_FORMS, (2, -2), (0.0, 0.0))
    assert moments_exponential(p, d) == moments_polynomial_exact(p, GL2_FORMS)


def test_one_dimensional_exponential():
    p = from_vertices([(0,), (1,)])
    m = moments_exponential(p, DHDensity((), (-2.0,), 0.0), tol=1e-12)
    mass = m.mass * math.exp(m.log_scale)
    assert abs(mass - (1 - math.exp(-2)) / 2) <= 1e-12 * mass
    assert m.error_bound * math.exp(m.log_scale) <= 1e-12 * mass


def _poly(forms):
    out = sp.Integer(1)
    for f in forms:
        out *= sp.Rational(str(f[0])) * X + sp.Rational(str(f[1])) * Y
    return out


def _sympy_1d(a, b, forms):
    t = sp.symbols("t")
    dens = sp.Integer(1)
    for f in forms:
        dens *= sp.Rational(str(f[0])) * t
    m = sp.integrate(dens, (t, sp.Rational(str(a)), sp.Rational(str(b))))
    return Fraction(str(sp.integrate(dens * t, (t, sp.Rational(str(a)), sp.Rational(str(b)))) / m))


def test_catalog_barycenters_against_sympy(catalog_data):
    for name, datum in catalog_data.items():
        p = datum.delta_plus
        bar, _ = barycenter(p, datum.forms)
        if p.ambient_dim == 1:
            assert bar == (_sympy_1d(p.vertices[0][0], p.vertices[-1][0], datum.forms),), name
        else:
            bx, by, _ = sympy_polygon_barycenter(p.vertices, _poly(datum.forms))
            assert bar == (bx, by), name


def test_monte_carlo_exponential_pentagon():
    rng = np.random.default_rng(20240611)
    zeta = rng.uniform(-0.6, 0.6, size=2)
    p = from_vertices(PENTAGON)
    d = DHDensity.from_zeta(GL2_FORMS, (2, -2), zeta)
    m = moments_exponential(p, d, tol=1e-10, second=False)
    scale = math.exp(m.log_scale)
    want = np.array([m.mass, *m.first]) * scale

    verts = np.array([[float(x) for x in v] for v in p.vertices])
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    box = float(np.prod(hi - lo))
    normals = np.array([[float(x) for x in a] for a, _ in p.halfspaces])
    offsets = np.array([float(b) for _, b in p.halfspaces])
    n_total, chunk = 10_000_000, 1_000_000
    s1 = np.zeros(3)
    s2 = np.zeros(3)
    for _ in range(n_total // chunk):
        pts = lo + (hi - lo) * rng.random((chunk, 2))
        inside = np.all(pts @ normals.T <= offsets, axis=1)
        f = inside * (pts[:, 0] - pts[:, 1]) ** 2 * np.exp(d.exp_constant + pts @ np.array(d.exp_coefficient))
        vals = np.stack([f, f * pts[:, 0], f * pts[:, 1]], axis=1) * box
        s1 += vals.sum(axis=0)
        s2 += (vals ** 2).sum(axis=0)
    mean = s1 / n_total
    se = np.sqrt((s2 / n_total - mean ** 2) / n_total)
    assert np.all(np.abs(mean - want) <= 3 * se), (mean, want, se)


def test_scaling_homogeneity(catalog_data):
    for c in (Fraction(2), Fraction(3, 7), Fraction(5, 2)):
        for name in ("gl2_cpt_2", "so4_cpt_1", "complete_conics", "p1xp1_sl2"):
            datum = catalog_data[name]
            bar, _ = barycenter(datum.delta_plus, datum.forms)
            bar_c, _ = barycenter(datum.delta_plus.scaled(c), datum.forms)
            assert bar_c == la.scale(c, bar)


def test_additivity_over_simplices(catalog_data):
    for name, datum in catalog_data.items():
        p = datum.delta_plus
        total = moments_polynomial_exact(p, datum.forms)
        parts = [simplex_moments_exact(p, s, datum.forms) for s in triangulate(p)]
        assert sum((m.mass for m in parts), Fraction(0)) == total.mass, name
        assert la.vsum((m.first for m in parts), p.ambient_dim) == total.first, name


def test_parallel_evaluation_is_deterministic(catalog_data):
    datum = catalog_data["gl2_cpt_3"]
    serial = moments_polynomial_exact(datum.delta_plus, datum.forms, workers=1)
    parallel = moments_polynomial_exact(datum.delta_plus, datum.forms, workers=2)
    assert serial == parallel


def test_barycenter_in_relative_interior(catalog_data):
    rng = random.Random(1)
    for name, datum in catalog_data.items():
        bar, _ = barycenter(datum.delta_plus, datum.forms)
        assert contains(datum.delta_plus, bar, "relative_interior"), name
        zeta = tuple(rng.uniform(-0.3, 0.3) for _ in range(datum.dim))
        m = moments_exponential(datum.delta_plus, datum.density(zeta), second=False)
        b = m.barycenter()
        # float point: test against the half-spaces with a small slack
        for a, off in datum.delta_plus.halfspaces:
            assert sum(float(x) * y for x, y in zip(a, b)) < float(off), name


def test_lift_invariance_when_polytope_lies_in_coset():
    # vertices minus 2ρ lie in span{(1,0)}; ζ changes along (0,1) annihilate it
    p = from_vertices([(0, 1), (3, 1)])
    four_rho = (2, 2)
    base = moments_exponential(p, DHDensity.from_zeta([(1, 0)], four_rho, (0.3, 0.0)), tol=1e-12)
    for t in (-1.5, 0.7, 4.0):
        # ⟨4ρ - 2p, (0,t)⟩ = t (2 - 2) = 0 identically on p
        other = moments_exponential(p, DHDensity.from_zeta([(1, 0)], four_rho, (0.3, t)), tol=1e-12)
        assert other.barycenter() == pytest.approx(base.barycenter(), abs=1e-12)
        mass_a = base.mass * math.exp(base.log_scale)
        mass_b = other.mass * math.exp(other.log_scale)
        assert abs(mass_a - mass_b) <= base.error_bound * math.exp(base.log_scale) + 1e-12 * mass_a


def test_exact_vs_forced_quadrature(catalog_data):
    for name, datum in catalog_data.items():
        p = datum.delta_plus
        exact = moments_polynomial_exact(p, datum.forms)
        quad = moments_exponential(p, DHDensity(datum.forms), tol=1e-13, force_quadrature=True)
        scale = math.exp(quad.log_scale)
        assert abs(quad.mass * scale - float(exact.mass)) <= 1e-12 * float(exact.mass), name
        for a, b in zip(quad.first, exact.first):
            assert abs(a * scale - float(b)) <= 1e-12 * float(exact.mass) * max(1, max(abs(float(x)) for v in p.vertices for x in v)), name
