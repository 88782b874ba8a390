"""Small exact linear-algebra kit over the rationals.

Vectors are tuples of :class:`fractions.Fraction`, matrices are tuples of such
rows.  Everything here is plain Gaussian elimination; sizes in this package
never exceed a dozen or so.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    """Coerce an int, Fraction, float or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        f = Fraction(s)
        return f
    if isinstance(x, float):
        return Fraction(x)
    # numpy integers and the like
    try:
        return Fraction(int(x)) if int(x) == x else Fraction(x)
    except (TypeError, ValueError):
        raise TypeError(f"cannot interpret {x!r} as a rational number") from None


def vec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), ZERO)


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vector:
    return tuple(c * x for x in a)


def neg(a: Sequence) -> Vector:
    return tuple(-x for x in a)


def vsum(vectors: Iterable[Sequence], n: int) -> Vector:
    out = [ZERO] * n
    for v in vectors:
        for i, x in enumerate(v):
            out[i] += x
    return tuple(out)


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matvec(m: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in m)


def vecmat(v: Sequence, m: Sequence[Sequence]) -> Vector:
    """Row vector times matrix."""
    n = len(m[0]) if m else 0
    return tuple(sum((v[i] * m[i][j] for i in range(len(m))), ZERO) for j in range(n))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = [list(map(frac, r)) for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], n: int) -> Matrix:
    """Basis of {x in Q^n : row . x = 0 for every row}."""
    reduced, pivots = rref(rows) if rows else ((), ())
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return tuple(basis)


def span_basis(vectors: Sequence[Sequence]) -> Matrix:
    """Canonical (RREF) basis of the span of ``vectors``."""
    return rref(vectors)[0] if vectors else ()


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if is_zero(v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [v]) == rank(basis)


def det(m: Sequence[Sequence]) -> Fraction:
    a = [list(map(frac, r)) for r in m]
    n = len(a)
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [list(map(frac, row)) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    reduced, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)) or len(reduced) < n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in reduced)


def solve(m: Sequence[Sequence], b: Sequence) -> Vector:
    """Solve the square system m x = b exactly."""
    return matvec(inverse(m), b)


def coordinates(v: Sequence, basis: Sequence[Sequence]) -> Vector | None:
    """Coefficients c with sum c_i basis_i = v, or None when v is not in the span."""
    k = len(basis)
    if k == 0:
        return () if is_zero(v) else None
    n = len(v)
    aug = [[basis[i][j] for i in range(k)] + [v[j]] for j in range(n)]
    reduced, pivots = rref(aug)
    if k in pivots:
        return None
    c = [ZERO] * k
    for row, p in zip(reduced, pivots):
        c[p] = row[k]
    return tuple(c)


def leading_minors(m: Sequence[Sequence]) -> list[Fraction]:
    return [det([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def denominator_lcm(xs: Iterable[Fraction]) -> int:
    out = 1
    for x in xs:
        out = lcm(out, x.denominator)
    return out


def primitive(v: Sequence) -> Vector:
    """Positive multiple of ``v`` with coprime integer entries."""
    v = vec(v)
    if is_zero(v):
        return v
    d = denominator_lcm(v)
    ints = [int(x * d) for x in v]
    g = 0
    for i in ints:
        g = gcd(g, i)
    return tuple(Fraction(i // g) for i in ints)


def fmt(x: Fraction) -> str:
    """``"p/q"`` (or ``"p"``) rendering used in reports."""
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(v: Sequence) -> list[str]:
    return [fmt(x) for x in v]
