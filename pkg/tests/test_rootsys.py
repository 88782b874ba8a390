from fractions import Fraction

import numpy as np
import pytest

from sphkstab import _linalg as la
from sphkstab.errors import InputError
from sphkstab.polytope import from_vertices
from sphkstab.rootsys import (
    build_root_system,
    derive_phi_p,
    from_simple_roots,
    group_compactification_data,
    product_root_system,
    scaled_form,
    symmetric_space_data,
    torus,
    two_rho_p,
    weyl_dimension,
)

# number of positive roots per simple type, from the classification tables
POSITIVE_COUNTS = {
    ("A", 1): 1, ("A", 2): 3, ("A", 4): 10, ("B", 2): 4, ("B", 3): 9, ("C", 3): 9,
    ("C", 4): 16, ("D", 4): 12, ("D", 5): 20, ("E", 6): 36, ("E", 7): 63, ("E", 8): 120,
    ("F", 4): 24, ("G", 2): 6,
}


def test_a1_weight_basis():
    rs = build_root_system("A", 1, 0)
    assert rs.simple_roots == ((Fraction(2),),)
    assert rs.form == ((Fraction(1, 2),),)
    assert rs.rho == (Fraction(1),)
    assert rs.kappa((2,), (2,)) == 2


def test_a1_with_center():
    rs = build_root_system("A", 1, 1)
    assert rs.ambient_dim == 2
    assert rs.positive_roots == ((Fraction(2), Fraction(0)),)
    # roots vanish on the central coordinate
    assert rs.kappa(rs.positive_roots[0], (0, 1)) == 0
    assert rs.form[1][1] == 1


def test_a2_rho_is_sum_of_simple_roots():
    rs = build_root_system("A", 2)
    assert len(rs.positive_roots) == 3
    assert rs.rho == la.add(*rs.simple_roots)
    assert rs.rho == (1, 1)


@pytest.mark.parametrize("key", sorted(POSITIVE_COUNTS))
def test_positive_root_counts_and_invariants(key):
    rs = build_root_system(*key)
    assert len(rs.positive_roots) == POSITIVE_COUNTS[key]
    rs.validate()
    # rho is (1,...,1) in the weight basis and half the positive sum
    assert rs.rho == (1,) * key[1]
    assert la.scale(2, rs.rho) == two_rho_p(rs.positive_roots)
    # long roots have squared length 2
    assert max(rs.kappa(a, a) for a in rs.positive_roots) == 2


@pytest.mark.parametrize("key", [("B", 3), ("C", 3), ("F", 4), ("G", 2), ("E", 6)])
def test_form_is_weyl_invariant(key):
    rs = build_root_system(*key)
    F = np.array([[float(x) for x in r] for r in rs.form])
    roots = [np.array([float(x) for x in a]) for a in rs.roots]
    for a in rs.simple_roots:
        a = np.array([float(x) for x in a])
        s = np.eye(len(a)) - 2 * np.outer(a, a @ F) / (a @ F @ a)  # reflection x -> x - 2κ(a,x)/κ(a,a) a
        assert np.allclose(s.T @ F @ s, F)
        images = [s @ r for r in roots]
        for im in images:
            assert any(np.allclose(im, r) for r in roots)


def test_invalid_type():
    with pytest.raises(InputError):
        build_root_system("E", 5)
    with pytest.raises(InputError):
        build_root_system("G", 3)
    with pytest.raises(InputError):
        build_root_system("A", 0)


def test_product_examples():
    a1 = build_root_system("A", 1)
    p = product_root_system([a1, a1])
    assert len(p.positive_roots) == 2
    assert p.form == ((Fraction(1, 2), 0), (0, Fraction(1, 2)))
    assert product_root_system([a1]) == a1
    q = product_root_system([build_root_system("A", 2), torus(1)])
    assert q.ambient_dim == 3


def test_explicit_simple_roots_match_builtin():
    rs = build_root_system("A", 2)
    other = from_simple_roots(rs.simple_roots, rs.form)
    assert set(other.positive_roots) == set(rs.positive_roots)


def test_explicit_rejects_non_root_basis():
    with pytest.raises(InputError):
        from_simple_roots([(1, 0), (1, 1)], la.identity(2))


def test_derive_phi_p_examples():
    a1 = build_root_system("A", 1)
    assert derive_phi_p(a1, from_vertices([(0,), (4,)])) == ((2,),)
    assert derive_phi_p(a1, from_vertices([(0,)])) == ()
    so4 = from_simple_roots([(1, 1), (1, -1)], la.identity(2))
    tri = from_vertices([(0, 0), (3, 3), (3, -3)])
    assert set(derive_phi_p(so4, tri)) == {(1, 1), (1, -1)}


def test_derive_phi_p_keeps_only_nonorthogonal_roots():
    rs = build_root_system("A", 2)
    # a segment along the first fundamental weight: α2 vanishes on it
    seg = from_vertices([(0, 0), (3, 0)])
    assert set(derive_phi_p(rs, seg)) == {(2, -1), (1, 1)}


def test_two_rho_p_examples():
    assert two_rho_p([(2,)]) == (2,)
    assert two_rho_p([], 3) == (0, 0, 0)
    assert two_rho_p([(1, 1), (1, -1)]) == (2, 0)


def test_two_rho_p_of_point_is_zero():
    rs = build_root_system("B", 2)
    assert two_rho_p(derive_phi_p(rs, from_vertices([(0, 0)])), 2) == (0, 0)


def test_weyl_dimension_examples():
    a1 = build_root_system("A", 1)
    assert weyl_dimension(a1, (3,)) == 4
    assert weyl_dimension(build_root_system("E", 8), (0,) * 8) == 1
    a2 = build_root_system("A", 2)
    assert weyl_dimension(a2, a2.rho) == 8


def test_weyl_dimension_known_values():
    # fundamental representations: G2 -> 7, 14; B3 spin -> 8; E8 adjoint -> 248
    g2 = build_root_system("G", 2)
    assert sorted([weyl_dimension(g2, (1, 0)), weyl_dimension(g2, (0, 1))]) == [7, 14]
    assert weyl_dimension(build_root_system("B", 3), (0, 0, 1)) == 8
    e8 = build_root_system("E", 8)
    dims = [weyl_dimension(e8, tuple(1 if i == j else 0 for j in range(8))) for i in range(8)]
    assert 248 in dims


def test_symmetric_space_sl2():
    a1 = build_root_system("A", 1)
    sym = symmetric_space_data(a1, [[-1]])
    assert sym.psi_plus == ((2,),)
    assert sym.two_rho_sigma == (2,)
    assert sym.restricted_positive_roots == ((4,),)
    assert sym.weyl_chamber_generators == ((1,),)


def test_symmetric_space_identity():
    rs = build_root_system("A", 2)
    sym = symmetric_space_data(rs, la.identity(2))
    assert sym.psi_plus == ()
    assert sym.restricted_positive_roots == ()
    assert len(sym.weyl_chamber_lineality) == 2


def test_symmetric_space_sl3_so3():
    rs = build_root_system("A", 2)
    sym = symmetric_space_data(rs, [[-1, 0], [0, -1]])
    assert set(sym.psi_plus) == set(rs.positive_roots)
    assert sym.two_rho_sigma == la.scale(2, rs.rho)
    assert set(sym.restricted_positive_roots) == {la.scale(2, a) for a in rs.positive_roots}
    for beta in sym.restricted_positive_roots:
        for v in sym.weyl_chamber_generators:
            assert la.dot(beta, v) >= 0


def test_symmetric_space_errors():
    rs = build_root_system("A", 2)
    with pytest.raises(InputError):
        symmetric_space_data(rs, [[2, 0], [0, 1]])
    with pytest.raises(InputError):
        # swaps the simple roots: an involution permuting Φ, but it fixes no
        # positive system compatibly with "fixed or negated"
        symmetric_space_data(rs, [[0, 1], [1, 0]])


def test_group_compactification_gl2():
    rs = from_simple_roots([(1, -1)], la.identity(2))
    g = group_compactification_data(rs)
    assert g.phi_p == ((1, -1), (1, -1))
    assert g.two_rho == (1, -1)
    assert g.lineality == ((1, 1),)
    assert g.rays == ((1, -1),)


def test_group_compactification_a1_and_so4():
    g = group_compactification_data(build_root_system("A", 1))
    assert g.phi_p == ((2,), (2,))
    assert g.two_rho == (2,)
    so4 = from_simple_roots([(1, 1), (1, -1)], la.identity(2))
    g = group_compactification_data(so4)
    assert sorted(g.phi_p) == [(1, -1), (1, -1), (1, 1), (1, 1)]


def test_scaled_form_keeps_phi_p():
    rs = build_root_system("A", 2)
    p = from_vertices([(0, 0), (6, 0), (0, 6)])
    assert derive_phi_p(scaled_form(rs, Fraction(7, 3)), p) == derive_phi_p(rs, p)
