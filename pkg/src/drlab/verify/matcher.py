"""Match a verified candidate numerator against the classified families.

Given an exact G (denominator power 1) that passed both identity checks, the
matcher produces the explicit equivalence data placing G in one of the three
families, or None if no family fits.  Matching is exact polynomial equality:
the candidate is normalized by the leading t-coefficient and translated by
the group element read off its own coefficients, and the result must equal
the reconstructed normal form verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..htype import SpaceSignature
from ..poly import Poly, compose_affine, nvars_of, t_var, v_var, z_var
from ..rationals import Vec, mat_mul

ZERO = Fraction(0)


@dataclass(frozen=True)
class FamilyMatch:
    kind: str            # "i", "ii", or "iii"
    parameters: dict     # solved parameters, exact rationals
    normalized: Poly     # the translated normal form the candidate equals


def _z_free(sig: SpaceSignature, p: Poly) -> bool:
    return all(
        all(e[sig.n + a] == 0 for a in range(sig.m)) for e in p.terms
    )


def _quadratic_form(sig: SpaceSignature, p: Poly):
    """Decompose a z-free polynomial of degree <= 2 in v as (L, u, c)."""
    n = p.nvars
    if p.total_degree() > 2 or not _z_free(sig, p):
        return None
    L = [[ZERO] * sig.n for _ in range(sig.n)]
    u = [ZERO] * sig.n
    c = ZERO
    for e, coeff in p.terms.items():
        if e[-1] != 0:
            return None
        support = [i for i in range(sig.n) if e[i]]
        deg = sum(e)
        if deg == 0:
            c = coeff
        elif deg == 1:
            u[support[0]] = coeff
        elif deg == 2 and len(support) == 1:
            i = support[0]
            L[i][i] = coeff
        else:
            i, j = support
            L[i][j] = coeff / 2
            L[j][i] = coeff / 2
    return tuple(tuple(r) for r in L), tuple(u), c


def _match_low_degree(sig: SpaceSignature, G: Poly) -> FamilyMatch | None:
    t_idx = sig.n + sig.m
    g1 = G.coefficient_of(t_idx, 1)
    g0 = G.coefficient_of(t_idx, 0)
    if g1.total_degree() > 0:
        return None
    c2 = g1.terms.get((0,) * G.nvars, ZERO)
    if g0.is_zero():
        return None
    if g0.total_degree() == 0:
        c1 = g0.terms.get((0,) * G.nvars, ZERO)
        normal = Poly.const(G.nvars, c1) + c2 * t_var(sig)
        if normal == G:
            return FamilyMatch("i", {"c1": c1, "c2": c2}, normal)
        return None
    dec = _quadratic_form(sig, g0)
    if dec is None:
        return None
    L, u, c = dec
    if all(all(x == 0 for x in row) for row in L):
        return None
    trL = sum(L[i][i] for i in range(sig.n))
    trL2 = sum(
        sum(L[i][j] * L[j][i] for j in range(sig.n)) for i in range(sig.n)
    )
    if trL == 0:
        return None
    c1 = trL2 / trL
    if c1 == 0 or mat_mul(L, L) != tuple(tuple(c1 * x for x in row) for row in L):
        return None
    w0 = tuple(-ui / (2 * c1) for ui in u)
    if tuple(sum(L[i][j] * w0[j] for j in range(sig.n)) for i in range(sig.n)) != tuple(
        c1 * x for x in w0
    ):
        return None
    if c != c1 * sum(x * x for x in w0):
        return None
    # reconstruct c1 |P v - w0|^2 + c2 t with P = L / c1
    nv = G.nvars
    acc = Poly.zero(nv)
    for i in range(sig.n):
        qi = (
            sum(((L[i][j] / c1) * v_var(sig, j) for j in range(sig.n)), Poly.zero(nv))
            - Poly.const(nv, w0[i])
        )
        acc = acc + qi * qi
    normal = c1 * acc + c2 * t_var(sig)
    if normal != G:
        return None
    return FamilyMatch("ii", {"c1": c1, "c2": c2, "w0": w0}, normal)


def _match_quartic(sig: SpaceSignature, G: Poly) -> FamilyMatch | None:
    t_idx = sig.n + sig.m
    g2 = G.coefficient_of(t_idx, 2)
    if g2.total_degree() > 0:
        return None
    gamma = g2.terms.get((0,) * G.nvars, ZERO)
    if gamma == 0:
        return None
    H = (1 / gamma) * G
    dec = _quadratic_form(sig, H.coefficient_of(t_idx, 1))
    if dec is None:
        return None
    L, u, c = dec
    half = Fraction(1, 2)
    if any(
        L[i][j] != (half if i == j else ZERO)
        for i in range(sig.n)
        for j in range(sig.n)
    ):
        return None
    v0 = tuple(-ui for ui in u)
    b1 = sum(x * x for x in v0) - 2 * c
    h0 = H.coefficient_of(t_idx, 0)
    # the z-linear coefficient c_a(v) must be affine in v; a member carries
    # c(v) = [v, v0] + z0 and is normalized by translating with (v0, -z0/2, 1)
    z0 = []
    for a in range(sig.m):
        ca = h0.coefficient_of(sig.n + a, 1)
        if ca.total_degree() > 1 or not _z_free(sig, ca):
            return None
        z0.append(ca.evaluate(tuple(v0) + (ZERO,) * (sig.m + 1)))
    g = (v0, tuple(-za / 2 for za in z0), Fraction(1))
    Ht = compose_affine(sig, H, g, Fraction(1), ZERO, k=1)
    # after translation: t^2 + (1/2)(|v|^2 - b1) t + |z|^2 + d(v)
    d1 = _quadratic_form(sig, Ht.coefficient_of(t_idx, 1))
    if d1 is None:
        return None
    L1, u1, c1c = d1
    if any(x != 0 for x in u1):
        return None
    if any(
        L1[i][j] != (half if i == j else ZERO)
        for i in range(sig.n)
        for j in range(sig.n)
    ):
        return None
    b1t = -2 * c1c
    if b1t != b1:
        return None
    h0t = Ht.coefficient_of(t_idx, 0)
    zsq = Poly.zero(G.nvars)
    for a in range(sig.m):
        zsq = zsq + z_var(sig, a) * z_var(sig, a)
    d = h0t - zsq
    if not _z_free(sig, d):
        return None
    # quartic part must be |v|^4 / 16; quadratic part gives Q; rest constant
    quart = Poly.zero(G.nvars)
    quad = Poly.zero(G.nvars)
    c0 = ZERO
    for e, coeff in d.terms.items():
        deg = sum(e[: sig.n])
        if deg == 4:
            quart = quart + Poly.monomial(G.nvars, e, coeff)
        elif deg == 2:
            quad = quad + Poly.monomial(G.nvars, e, coeff)
        elif deg == 0:
            c0 = coeff
        else:
            return None
    vsq = Poly.zero(G.nvars)
    for i in range(sig.n):
        vsq = vsq + v_var(sig, i) * v_var(sig, i)
    if quart != Fraction(1, 16) * (vsq * vsq):
        return None
    qdec = _quadratic_form(sig, quad)
    if qdec is None:
        return None
    Q, qu, qc = qdec
    if qc != 0 or any(x != 0 for x in qu):
        return None
    if c0 < 0:
        return None
    lam_sq = c0 / 4
    target = tuple(
        tuple(lam_sq if i == j else ZERO for j in range(sig.n)) for i in range(sig.n)
    )
    if mat_mul(Q, Q) != target:
        return None
    for J in sig.module.generators:
        if mat_mul(J, Q) != mat_mul(Q, J):
            return None
    # reconstruct the normal form and require exact equality
    t = t_var(sig)
    normal = (
        t * t
        + half * ((vsq - Poly.const(G.nvars, b1)) * t)
        + zsq
        + Fraction(1, 16) * (vsq * vsq)
        + quad
        + Poly.const(G.nvars, c0)
    )
    if normal != Ht:
        return None
    return FamilyMatch(
        "iii",
        {
            "gamma": gamma,
            "b1": b1,
            "v0": v0,
            "z0": tuple(z0),
            "lambda_sq": lam_sq,
            "Q": Q,
        },
        normal,
    )


def match_main_theorem_family(sig: SpaceSignature, G: Poly) -> FamilyMatch | None:
    """Equivalence-match G against the families; None means unexplained."""
    if G.nvars != nvars_of(sig):
        raise ValueError("polynomial over the wrong variable set")
    t_idx = sig.n + sig.m
    r = G.max_degree(t_idx)
    if r <= 1:
        return _match_low_degree(sig, G)
    if r == 2:
        return _match_quartic(sig, G)
    return None
