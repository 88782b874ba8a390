"""Root systems with an explicit Weyl-invariant scalar product.

Vectors on the character side live in a fixed rational basis.  For the
built-in simple types that basis is the fundamental-weight basis, so the
simple roots are the rows of the Cartan matrix and ``rho`` is ``(1, ..., 1)``.
The scalar product ``F`` is normalised so long roots have squared length 2 in
each simple factor; central directions get the identity block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _linalg as la
from .errors import InputError


@dataclass(frozen=True)
class RootSystemData:
    ambient_dim: int
    simple_roots: tuple
    positive_roots: tuple
    form: tuple
    rho: tuple = field(init=False)

    def __post_init__(self):
        n = self.ambient_dim
        object.__setattr__(self, "rho", la.scale(Fraction(1, 2), la.vsum(self.positive_roots, n)))

    def kappa(self, a: Sequence, b: Sequence) -> Fraction:
        """The scalar product aᵀ F b."""
        return la.dot(a, la.matvec(self.form, b))

    def linear_form(self, alpha: Sequence) -> tuple:
        """Coefficient vector of p ↦ κ(alpha, p)."""
        return la.vecmat(alpha, self.form)

    @property
    def roots(self) -> tuple:
        return self.positive_roots + tuple(la.neg(a) for a in self.positive_roots)

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    def cartan_matrix(self) -> tuple:
        s = self.simple_roots
        return tuple(
            tuple(2 * self.kappa(a, b) / self.kappa(b, b) for b in s) for a in s
        )

    def validate(self) -> None:
        """Raise :class:`InputError` if any structural invariant fails."""
        n = self.ambient_dim
        f = self.form
        if len(f) != n or any(len(r) != n for r in f):
            raise InputError("form must be a square matrix of the ambient size", "form")
        if any(f[i][j] != f[j][i] for i in range(n) for j in range(n)):
            raise InputError("form must be symmetric", "form")
        if any(m <= 0 for m in la.leading_minors(f)):
            raise InputError("form must be positive definite", "form")
        for i, row in enumerate(self.cartan_matrix()):
            for j, c in enumerate(row):
                if i != j and (c > 0 or c.denominator != 1):
                    raise InputError(f"Cartan entry ({i},{j}) = {c} is not a nonpositive integer",
                                     "simple_roots")
        for beta in self.positive_roots:
            c = la.coordinates(beta, self.simple_roots)
            if c is None or any(x < 0 or x.denominator != 1 for x in c):
                raise InputError(f"positive root {la.fmt_vec(beta)} is not a nonnegative "
                                 "integer combination of simple roots", "positive_roots")


# Gram matrices of simple roots (Bourbaki numbering), long roots of length² 2.

def _gram(type_letter: str, rank: int) -> list[list[Fraction]]:
    n = rank
    g = [[Fraction(0)] * n for _ in range(n)]

    def link(i, j, v):
        g[i][j] = g[j][i] = Fraction(v)

    t = type_letter.upper()
    if t == "A" and n >= 1:
        for i in range(n):
            g[i][i] = Fraction(2)
        for i in range(n - 1):
            link(i, i + 1, -1)
    elif t == "B" and n >= 2:
        for i in range(n - 1):
            g[i][i] = Fraction(2)
        g[n - 1][n - 1] = Fraction(1)
        for i in range(n - 1):
            link(i, i + 1, -1)
    elif t == "C" and n >= 2:
        for i in range(n - 1):
            g[i][i] = Fraction(1)
        g[n - 1][n - 1] = Fraction(2)
        for i in range(n - 2):
            link(i, i + 1, Fraction(-1, 2))
        link(n - 2, n - 1, -1)
    elif t == "D" and n >= 3:
        for i in range(n):
            g[i][i] = Fraction(2)
        for i in range(n - 2):
            link(i, i + 1, -1)
        link(n - 3, n - 1, -1)
    elif t == "E" and n in (6, 7, 8):
        for i in range(n):
            g[i][i] = Fraction(2)
        link(0, 2, -1)
        link(1, 3, -1)
        for i in range(2, n - 1):
            link(i, i + 1, -1)
    elif t == "F" and n == 4:
        g[0][0] = g[1][1] = Fraction(2)
        g[2][2] = g[3][3] = Fraction(1)
        link(0, 1, -1)
        link(1, 2, -1)
        link(2, 3, Fraction(-1, 2))
    elif t == "G" and n == 2:
        g[0][0] = Fraction(2, 3)
        g[1][1] = Fraction(2)
        link(0, 1, -1)
    else:
        raise InputError(f"no simple root system of type {type_letter}{rank}", "root_system")
    return g


def _positive_roots_in_simple_coords(cartan: Sequence[Sequence[Fraction]]) -> list[tuple[int, ...]]:
    """Positive roots as integer coordinate tuples, via root strings.

    ``cartan[i][j] = <alpha_i, alpha_j^vee>``.
    """
    r = len(cartan)
    simple = [tuple(1 if i == j else 0 for j in range(r)) for i in range(r)]
    roots = list(simple)
    known = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(r):
                pairing = sum(beta[j] * cartan[j][i] for j in range(r))
                # p = how far down the alpha_i string through beta goes
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in known:
                        p += 1
                    else:
                        break
                q = p - pairing
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in known:
                        known.add(up)
                        roots.append(up)
                        nxt.append(up)
        layer = nxt
    roots.sort(key=lambda c: (sum(c), c))
    return roots


def from_simple_roots(simple_roots: Sequence[Sequence], form: Sequence[Sequence]) -> RootSystemData:
    """Root system generated by explicit simple roots under the scalar product ``form``."""
    form = la.mat(form)
    n = len(form)
    simple = tuple(la.vec(a) for a in simple_roots)
    if any(len(a) != n for a in simple):
        raise InputError("simple roots and form have different dimensions", "simple_roots")
    if simple and la.rank(simple) != len(simple):
        raise InputError("simple roots are linearly dependent", "simple_roots")
    kap = lambda a, b: la.dot(a, la.matvec(form, b))  # noqa: E731
    for a in simple:
        if kap(a, a) <= 0:
            raise InputError("simple roots must have positive length", "simple_roots")
    cartan = [[2 * kap(a, b) / kap(b, b) for b in simple] for a in simple]
    for i, row in enumerate(cartan):
        for j, c in enumerate(row):
            if i != j and (c > 0 or c.denominator != 1):
                raise InputError(f"simple roots do not form a root basis (Cartan entry {c})",
                                 "simple_roots")
    coords = _positive_roots_in_simple_coords(cartan)
    positive = tuple(
        la.vsum((la.scale(c, a) for c, a in zip(cs, simple)), n) for cs in coords
    )
    rs = RootSystemData(n, simple, positive, form)
    rs.validate()
    return rs


def build_root_system(type_letter: str, rank: int, central_dims: int = 0) -> RootSystemData:
    """Simple root system of the given Cartan type, plus an optional central torus."""
    if not isinstance(rank, int) or rank < 1:
        raise InputError("rank must be a positive integer", "root_system.rank")
    if central_dims < 0:
        raise InputError("central_dims must be nonnegative", "root_system.center")
    gram = _gram(type_letter, rank)
    cartan = [[2 * gram[i][j] / gram[j][j] for j in range(rank)] for i in range(rank)]
    # In the fundamental-weight basis, alpha_i is row i of the Cartan matrix
    # and F = C^{-1} D with D = diag(|alpha_i|^2 / 2).
    simple = la.mat(cartan)
    d = [[gram[i][i] / 2 if i == j else Fraction(0) for j in range(rank)] for i in range(rank)]
    form = la.matmul(la.inverse(simple), d)
    coords = _positive_roots_in_simple_coords(cartan)
    positive = tuple(la.vsum((la.scale(c, a) for c, a in zip(cs, simple)), rank) for cs in coords)
    rs = RootSystemData(rank, simple, positive, form)
    if central_dims:
        rs = product_root_system([rs, torus(central_dims)])
    rs.validate()
    return rs


def torus(dim: int) -> RootSystemData:
    """No roots, identity form: the root datum of a torus."""
    return RootSystemData(dim, (), (), la.identity(dim))


def product_root_system(parts: Sequence[RootSystemData]) -> RootSystemData:
    if not parts:
        raise InputError("product of an empty list of root systems", "root_system")
    n = sum(p.ambient_dim for p in parts)
    simple, positive = [], []
    form = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for p in parts:
        pad = lambda v: la.zeros(off) + tuple(v) + la.zeros(n - off - p.ambient_dim)  # noqa: E731
        simple += [pad(a) for a in p.simple_roots]
        positive += [pad(a) for a in p.positive_roots]
        for i in range(p.ambient_dim):
            for j in range(p.ambient_dim):
                form[off + i][off + j] = p.form[i][j]
        off += p.ambient_dim
    return RootSystemData(n, tuple(simple), tuple(positive), la.mat(form))


def scaled_form(rs: RootSystemData, c) -> RootSystemData:
    c = la.frac(c)
    if c <= 0:
        raise InputError("form scale must be positive")
    return RootSystemData(rs.ambient_dim, rs.simple_roots, rs.positive_roots,
                          tuple(la.scale(c, r) for r in rs.form))


def derive_phi_p(rs: RootSystemData, vertices: Sequence[Sequence]) -> tuple:
    """Positive roots whose form κ(α, ·) does not vanish on all of ``vertices``.

    ``vertices`` may also be a polytope object exposing ``.vertices``.
    """
    verts = getattr(vertices, "vertices", vertices)
    if any(len(v) != rs.ambient_dim for v in verts):
        raise InputError("polytope and root system have different dimensions", "polytope")
    out = []
    for alpha in rs.positive_roots:
        lf = rs.linear_form(alpha)
        if any(la.dot(lf, v) != 0 for v in verts):
            out.append(alpha)
    return tuple(out)


def two_rho_p(phi_p: Sequence[Sequence], ambient_dim: int | None = None) -> tuple:
    """Exact sum of a collection of roots (zero vector when empty)."""
    if not phi_p:
        if ambient_dim is None:
            raise InputError("ambient dimension needed for an empty root set")
        return la.zeros(ambient_dim)
    return la.vsum(phi_p, len(phi_p[0]))


def weyl_dimension(rs: RootSystemData, lam: Sequence, roots: Sequence[Sequence] | None = None) -> Fraction:
    """Weyl dimension formula ∏ κ(λ+ρ, α)/κ(ρ, α) over ``roots`` (default Φ⁺).

    Passing a multiset of roots (e.g. each root twice) gives the matching
    product, which is how the squared dimensions of group compactifications
    are obtained.
    """
    import warnings

    lam = la.vec(lam)
    if any(rs.kappa(lam, a) < 0 for a in rs.simple_roots):
        warnings.warn("weight is not dominant", stacklevel=2)
    shifted = la.add(lam, rs.rho)
    out = Fraction(1)
    for alpha in (rs.positive_roots if roots is None else roots):
        out *= rs.kappa(shifted, alpha) / rs.kappa(rs.rho, alpha)
    return out


@dataclass(frozen=True)
class RestrictedRootData:
    psi_plus: tuple
    two_rho_sigma: tuple
    restricted_positive_roots: tuple
    weyl_chamber_generators: tuple
    weyl_chamber_lineality: tuple


def symmetric_space_data(rs: RootSystemData, sigma: Sequence[Sequence]) -> RestrictedRootData:
    """Restricted root data of the involution ``sigma`` acting on characters."""
    from .cones import dual_cone

    n = rs.ambient_dim
    s = la.mat(sigma)
    if len(s) != n or any(len(r) != n for r in s):
        raise InputError("sigma has the wrong shape", "sigma")
    if la.matmul(s, s) != la.identity(n):
        raise InputError("sigma is not an involution", "sigma")
    roots = set(rs.roots)
    negative = {la.neg(a) for a in rs.positive_roots}
    psi = []
    for alpha in rs.positive_roots:
        image = la.matvec(s, alpha)
        if image not in roots:
            raise InputError("sigma does not permute the roots", "sigma")
        if image == alpha:
            continue
        if image not in negative:
            raise InputError("positive system is not adapted to sigma "
                             f"(sigma sends {la.fmt_vec(alpha)} to a positive root)", "sigma")
        psi.append(alpha)
    # the negatives must map consistently too; sigma linear so this follows
    restricted = []
    for alpha in psi:
        beta = la.sub(alpha, la.matvec(s, alpha))
        if beta not in restricted:
            restricted.append(beta)
    chamber = dual_cone(restricted, dim=n)
    return RestrictedRootData(
        psi_plus=tuple(psi),
        two_rho_sigma=two_rho_p(psi, n),
        restricted_positive_roots=tuple(restricted),
        weyl_chamber_generators=chamber.rays,
        weyl_chamber_lineality=chamber.lineality,
    )


@dataclass(frozen=True)
class GroupCompactificationData:
    phi_p: tuple          # each positive root twice
    two_rho: tuple
    rays: tuple
    lineality: tuple


def group_compactification_data(rs_hat: RootSystemData) -> GroupCompactificationData:
    """Data of G×G/diag(G) expressed on the first factor's characters."""
    from .cones import dual_cone

    n = rs_hat.ambient_dim
    doubled = tuple(a for alpha in rs_hat.positive_roots for a in (alpha, alpha))
    chamber = dual_cone(rs_hat.positive_roots, dim=n)
    return GroupCompactificationData(
        phi_p=doubled,
        two_rho=two_rho_p(rs_hat.positive_roots, n),
        rays=chamber.rays,
        lineality=chamber.lineality,
    )
