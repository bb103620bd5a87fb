"""Exact linear algebra over the rationals.

Vectors are tuples of Fraction, matrices are tuples of row tuples.  Everything
here is small (dimensions <= 16), so plain Gaussian elimination with exact
arithmetic is both fast enough and free of rounding concerns.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def zero_vec(k: int) -> Vec:
    return (ZERO,) * k


def identity(k: int) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(k)) for i in range(k))


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def add_vec(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub_vec(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def scale_vec(c: Fraction, a: Sequence[Fraction]) -> Vec:
    return tuple(c * x for x in a)


def mat_vec(M: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vec:
    return tuple(dot(row, x) for row in M)


def mat_mul(A: Sequence[Sequence[Fraction]], B: Sequence[Sequence[Fraction]]) -> Mat:
    cols = list(zip(*B))
    return tuple(tuple(dot(row, col) for col in cols) for row in A)


def transpose(M: Sequence[Sequence[Fraction]]) -> Mat:
    return tuple(zip(*M))


def mat_eq(A: Sequence[Sequence[Fraction]], B: Sequence[Sequence[Fraction]]) -> bool:
    return all(tuple(ra) == tuple(rb) for ra, rb in zip(A, B)) and len(A) == len(B)


def is_zero_vec(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def rational_sqrt(q: Fraction) -> Fraction:
    """Exact square root of a perfect-square rational; ValueError otherwise."""
    q = frac(q)
    if q < 0:
        raise ValueError(f"negative argument: {q}")
    pn, pd = isqrt(q.numerator), isqrt(q.denominator)
    if pn * pn != q.numerator or pd * pd != q.denominator:
        raise ValueError(f"{q} is not the square of a rational")
    return Fraction(pn, pd)


def is_square(q: Fraction) -> bool:
    try:
        rational_sqrt(q)
        return True
    except ValueError:
        return False


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vec:
    """Solve the square system A x = b exactly; A must be invertible."""
    k = len(A)
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(aug[r][k] for r in range(k))


def invert(M: Sequence[Sequence[Fraction]]) -> Mat:
    k = len(M)
    cols = [solve(M, tuple(ONE if i == j else ZERO for i in range(k))) for j in range(k)]
    return transpose(cols)


def projection_matrix(basis: Sequence[Sequence[Fraction]], n: int) -> Mat:
    """Orthogonal projection onto span(basis) inside Q^n: B (B^T B)^-1 B^T.

    The basis vectors need not be orthogonal or normalized, only independent.
    An empty basis projects onto {0}.
    """
    if not basis:
        return tuple(zero_vec(n) for _ in range(n))
    B = [vec(b) for b in basis]
    if any(len(b) != n for b in B):
        raise ValueError("basis vector of wrong length")
    gram = tuple(tuple(dot(bi, bj) for bj in B) for bi in B)
    ginv = invert(gram)  # raises on dependent basis
    # P = sum_{ij} ginv[i][j] * b_i b_j^T
    P = [[ZERO] * n for _ in range(n)]
    for i, bi in enumerate(B):
        for j, bj in enumerate(B):
            c = ginv[i][j]
            if c == 0:
                continue
            for r in range(n):
                if bi[r] == 0:
                    continue
                cr = c * bi[r]
                for s in range(n):
                    P[r][s] += cr * bj[s]
    return tuple(tuple(row) for row in P)


def orthogonalize(vectors: Sequence[Sequence[Fraction]]) -> list[Vec]:
    """Gram-Schmidt without normalization; drops dependent vectors."""
    out: list[Vec] = []
    for v in vectors:
        w = vec(v)
        for u in out:
            c = dot(w, u) / dot(u, u)
            w = sub_vec(w, scale_vec(c, u))
        if not is_zero_vec(w):
            out.append(w)
    return out


def orthogonal_complement_basis(basis: Sequence[Sequence[Fraction]], n: int) -> list[Vec]:
    """Rational basis of the orthogonal complement of span(basis) in Q^n."""
    span = orthogonalize(basis)
    out: list[Vec] = []
    for j in range(n):
        e = tuple(ONE if i == j else ZERO for i in range(n))
        w = e
        for u in span + out:
            c = dot(w, u) / dot(u, u)
            w = sub_vec(w, scale_vec(c, u))
        if not is_zero_vec(w):
            out.append(w)
    return out
