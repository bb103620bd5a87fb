"""Exact sparse multivariate polynomials and the differential operators of the
half-space model.

Representation: a Poly maps exponent tuples to nonzero Fraction coefficients.
For a space with dim v = n and dim z = m the variable order is fixed as

    v1 .. vn, z1 .. zm, t      (nvars = n + m + 1, t last),

matching the basis order of SpaceSignature.  All arithmetic re-canonicalizes
(zero coefficients are never stored), so equality of polynomials is equality
of dicts.

The signature-parameterized operators live here too:

    apply_Di   D_i = d/dv_i - 1/2 d_{[e_i, v]}          (one per v-direction)
    mix_operator   sum_i d/dv_i d_{[v, e_i]}
    d_operator     Delta_v + (|v|^2/4) Delta_z + mix_operator

together with the assembled polynomials t^k * (Laplacian of G/t^k) and
t^(2k) * |grad(G/t^k)|^2, which turn the transnormality and Laplace
conditions into polynomial identities.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .htype import SpaceSignature
from .rationals import frac, rational_sqrt

ZERO = Fraction(0)
ONE = Fraction(1)

Exponent = tuple[int, ...]


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction] | None = None):
        self.nvars = nvars
        if terms is None:
            self.terms: dict[Exponent, Fraction] = {}
        else:
            self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars)

    @staticmethod
    def const(nvars: int, c) -> "Poly":
        c = frac(c)
        return Poly(nvars, {(0,) * nvars: c} if c != 0 else {})

    @staticmethod
    def variable(nvars: int, idx: int) -> "Poly":
        if not 0 <= idx < nvars:
            raise ValueError(f"variable index {idx} out of range for nvars={nvars}")
        e = [0] * nvars
        e[idx] = 1
        return Poly(nvars, {tuple(e): ONE})

    @staticmethod
    def monomial(nvars: int, exps: Sequence[int], c=1) -> "Poly":
        return Poly(nvars, {tuple(exps): frac(c)})

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise ValueError("polynomials over different variable sets")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(self.nvars, other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = frac(other)
            if c == 0:
                return Poly(self.nvars)
            return Poly(self.nvars, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"Poly({self.to_text()})"

    # -- calculus and structure ---------------------------------------------

    def diff(self, var: int) -> "Poly":
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            k = e[var]
            if k == 0:
                continue
            e2 = list(e)
            e2[var] = k - 1
            out[tuple(e2)] = out.get(tuple(e2), ZERO) + c * k
        return Poly(self.nvars, out)

    def max_degree(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coefficient_of(self, var: int, power: int) -> "Poly":
        """Coefficient of var^power, as a Poly with that exponent zeroed."""
        out = {}
        for e, c in self.terms.items():
            if e[var] == power:
                e2 = list(e)
                e2[var] = 0
                out[tuple(e2)] = c
        return Poly(self.nvars, out)

    def divisible_by(self, var: int) -> bool:
        return bool(self.terms) and all(e[var] >= 1 for e in self.terms)

    def divide_by(self, var: int, power: int = 1) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[var] < power:
                raise ValueError("not divisible")
            e2 = list(e)
            e2[var] -= power
            out[tuple(e2)] = c
        return Poly(self.nvars, out)

    def substitute(self, mapping: Mapping[int, "Poly"]) -> "Poly":
        """Substitute polynomials for variables; unmapped variables persist."""
        pow_cache: dict[int, list[Poly]] = {}

        def powers(idx: int, upto: int) -> list[Poly]:
            cache = pow_cache.setdefault(idx, [Poly.const(self.nvars, 1)])
            while len(cache) <= upto:
                cache.append(cache[-1] * mapping[idx])
            return cache

        result = Poly.zero(self.nvars)
        for e, c in self.terms.items():
            term = Poly.const(self.nvars, c)
            passthrough = [0] * self.nvars
            for idx, k in enumerate(e):
                if k == 0:
                    continue
                if idx in mapping:
                    term = term * powers(idx, k)[k]
                else:
                    passthrough[idx] = k
            if any(passthrough):
                term = term * Poly.monomial(self.nvars, passthrough)
            result = result + term
        return result

    def evaluate(self, point: Sequence):
        """Evaluate at a point; exact for Fraction inputs, float otherwise."""
        if len(point) != self.nvars:
            raise ValueError("point of wrong length")
        total = None
        for e, c in self.terms.items():
            val = c if all(isinstance(p, (Fraction, int)) for p in point) else float(c)
            for x, k in zip(point, e):
                if k:
                    val = val * x**k
            total = val if total is None else total + val
        if total is None:
            return ZERO if all(isinstance(p, (Fraction, int)) for p in point) else 0.0
        return total

    def exponent_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """(exponents, coefficients) as float arrays for batched evaluation."""
        if not self.terms:
            return np.zeros((0, self.nvars), dtype=np.int64), np.zeros(0)
        items = sorted(self.terms.items())
        E = np.array([e for e, _ in items], dtype=np.int64)
        c = np.array([float(v) for _, v in items], dtype=float)
        return E, c

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        """Evaluate at many float points at once; X has shape (P, nvars)."""
        E, c = self.exponent_matrix()
        if len(c) == 0:
            return np.zeros(X.shape[0])
        return np.einsum("pm,m->p", np.prod(X[:, None, :] ** E[None, :, :], axis=2), c)

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items())

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """Canonical text form, terms in lexicographic exponent order."""
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            factors = [
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            ]
            if factors:
                parts.append(f"{c}*" + "*".join(factors))
            else:
                parts.append(str(c))
        return " + ".join(parts)


def poly_names(n: int, m: int) -> list[str]:
    return [f"v{i + 1}" for i in range(n)] + [f"z{a + 1}" for a in range(m)] + ["t"]


class PolyFraction:
    """A polynomial numerator over the denominator t^k.

    For k >= 1 the numerator must not be divisible by t, which keeps the
    represented function non-constant and the denominator power well defined.
    """

    __slots__ = ("numerator", "k", "nvars")

    def __init__(self, numerator: Poly, k: int):
        if k < 0:
            raise ValueError("denominator power must be >= 0")
        t_idx = numerator.nvars - 1
        if k >= 1 and numerator.divisible_by(t_idx):
            raise ValueError("numerator divisible by t")
        self.numerator = numerator
        self.k = k
        self.nvars = numerator.nvars

    def evaluate(self, point: Sequence):
        t = point[-1]
        return self.numerator.evaluate(point) / t**self.k

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        return self.numerator.evaluate_batch(X) / X[:, -1] ** self.k

    def __eq__(self, other):
        return (
            isinstance(other, PolyFraction)
            and self.k == other.k
            and self.numerator == other.numerator
        )

    def __repr__(self):
        return f"PolyFraction(({self.numerator.to_text()}) / t^{self.k})"


# -- signature-bound variable helpers ----------------------------------------


def nvars_of(sig: SpaceSignature) -> int:
    return sig.n + sig.m + 1


def v_var(sig: SpaceSignature, i: int) -> Poly:
    if not 0 <= i < sig.n:
        raise IndexError(f"v index {i} out of range")
    return Poly.variable(nvars_of(sig), i)


def z_var(sig: SpaceSignature, a: int) -> Poly:
    if not 0 <= a < sig.m:
        raise IndexError(f"z index {a} out of range")
    return Poly.variable(nvars_of(sig), sig.n + a)


def t_var(sig: SpaceSignature) -> Poly:
    return Poly.variable(nvars_of(sig), sig.n + sig.m)


def const(sig: SpaceSignature, c) -> Poly:
    return Poly.const(nvars_of(sig), c)


def v_norm_sq(sig: SpaceSignature) -> Poly:
    acc = Poly.zero(nvars_of(sig))
    for i in range(sig.n):
        acc = acc + v_var(sig, i) * v_var(sig, i)
    return acc


def bracket_poly_vec(sig: SpaceSignature, avec: Sequence[Poly], bvec: Sequence[Poly]) -> tuple[Poly, ...]:
    """[a, b] in z for vectors of polynomial entries, via structure constants."""
    nv = nvars_of(sig)
    out = [Poly.zero(nv) for _ in range(sig.m)]
    for i, ai in enumerate(avec):
        if ai.is_zero():
            continue
        for j, bj in enumerate(bvec):
            if bj.is_zero():
                continue
            zv = sig.bracket_table[i][j]
            prod = None
            for a in range(sig.m):
                if zv[a]:
                    if prod is None:
                        prod = ai * bj
                    out[a] = out[a] + zv[a] * prod
    return tuple(out)


def _di_coefficients(sig: SpaceSignature) -> list[list[Poly]]:
    """Linear polynomials [e_i, v]^a, cached on the signature."""
    cached = getattr(sig, "_di_coeff_cache", None)
    if cached is not None:
        return cached
    nv = nvars_of(sig)
    coeffs = []
    for i in range(sig.n):
        row = []
        for a in range(sig.m):
            p = Poly.zero(nv)
            for j in range(sig.n):
                c = sig.bracket_table[i][j][a]
                if c:
                    p = p + c * v_var(sig, j)
            row.append(p)
        coeffs.append(row)
    sig._di_coeff_cache = coeffs
    return coeffs


def apply_Di(sig: SpaceSignature, G: Poly, i: int) -> Poly:
    """D_i G = dG/dv_i - 1/2 sum_a [e_i, v]^a dG/dz_a."""
    if not 0 <= i < sig.n:
        raise IndexError(f"D index {i} out of range for n={sig.n}")
    out = G.diff(i)
    coeffs = _di_coefficients(sig)
    for a in range(sig.m):
        dz = G.diff(sig.n + a)
        if dz.is_zero() or coeffs[i][a].is_zero():
            continue
        out = out - Fraction(1, 2) * (coeffs[i][a] * dz)
    return out


def delta_v(sig: SpaceSignature, G: Poly) -> Poly:
    out = Poly.zero(G.nvars)
    for i in range(sig.n):
        out = out + G.diff(i).diff(i)
    return out


def delta_z(sig: SpaceSignature, G: Poly) -> Poly:
    out = Poly.zero(G.nvars)
    for a in range(sig.m):
        out = out + G.diff(sig.n + a).diff(sig.n + a)
    return out


def mix_operator(sig: SpaceSignature, G: Poly) -> Poly:
    """sum_i d/dv_i d_{[v, e_i]} G; the coefficient [v, e_i]^a = -[e_i, v]^a."""
    coeffs = _di_coefficients(sig)
    out = Poly.zero(G.nvars)
    for a in range(sig.m):
        dza = G.diff(sig.n + a)
        if dza.is_zero():
            continue
        for i in range(sig.n):
            if coeffs[i][a].is_zero():
                continue
            second = dza.diff(i)
            if second.is_zero():
                continue
            out = out - coeffs[i][a] * second
    return out


def d_operator(sig: SpaceSignature, G: Poly) -> Poly:
    """Delta_v + (|v|^2 / 4) Delta_z + the mixed second-order term."""
    out = delta_v(sig, G)
    dz = delta_z(sig, G)
    if not dz.is_zero():
        out = out + Fraction(1, 4) * (v_norm_sq(sig) * dz)
    return out + mix_operator(sig, G)


def laplacian_numerator(sig: SpaceSignature, G: Poly, k: int) -> Poly:
    """t^k * Laplacian(G / t^k) as an exact polynomial."""
    t = t_var(sig)
    n2 = Fraction(sig.m) + Fraction(sig.n, 2)
    dtG = G.diff(sig.n + sig.m)
    dttG = dtG.diff(sig.n + sig.m)
    out = t * delta_v(sig, G)
    dz = delta_z(sig, G)
    if not dz.is_zero():
        out = out + (t * t + Fraction(1, 4) * (t * v_norm_sq(sig))) * dz
    out = out + t * (t * dttG) - (2 * k) * (t * dtG) + Fraction(k * (k + 1)) * G
    out = out - (n2 - 1) * (t * dtG - Fraction(k) * G)
    return out + t * mix_operator(sig, G)


def gradient_norm_numerator(sig: SpaceSignature, G: Poly, k: int) -> Poly:
    """t^(2k) * |grad(G / t^k)|^2 as an exact polynomial:

        t * sum_i (D_i G)^2 + t^2 * sum_a (dG/dz_a)^2 + (t dG/dt - k G)^2.
    """
    t = t_var(sig)
    s1 = Poly.zero(G.nvars)
    for i in range(sig.n):
        di = apply_Di(sig, G, i)
        if not di.is_zero():
            s1 = s1 + di * di
    s2 = Poly.zero(G.nvars)
    for a in range(sig.m):
        da = G.diff(sig.n + a)
        if not da.is_zero():
            s2 = s2 + da * da
    radial = t * G.diff(sig.n + sig.m) - Fraction(k) * G
    return t * s1 + t * (t * s2) + radial * radial


def compose_affine(sig: SpaceSignature, G: Poly, g, c1, c2, k: int = 1) -> Poly:
    """Numerator of c1 * (G/t^k) o L_g + c2, for a group element g = (vbar, zbar, tbar).

    The left translation extends to the affine substitution

        v -> sqrt(tbar) v + vbar,
        z -> tbar z + zbar + 1/2 sqrt(tbar) [vbar, v],
        t -> tbar t,

    so the result is (c1 / tbar^k) G(subs) + c2 t^k.  Requires c1 != 0 and
    tbar a perfect square of a rational so everything stays exact.
    """
    c1, c2 = frac(c1), frac(c2)
    if c1 == 0:
        raise ValueError("c1 must be nonzero")
    vbar, zbar, tbar = g
    vbar = [frac(x) for x in vbar]
    zbar = [frac(x) for x in zbar]
    tbar = frac(tbar)
    if tbar <= 0:
        raise ValueError("tbar must be positive")
    root = rational_sqrt(tbar)  # raises if not a perfect square
    nv = nvars_of(sig)
    mapping: dict[int, Poly] = {}
    for i in range(sig.n):
        mapping[i] = root * v_var(sig, i) + Poly.const(nv, vbar[i])
    for a in range(sig.m):
        # [vbar, v]^a as a linear polynomial in v
        lin = Poly.zero(nv)
        for j in range(sig.n):
            coeff = sum(
                (sig.bracket_table[i][j][a] * vbar[i] for i in range(sig.n)), ZERO
            )
            if coeff:
                lin = lin + coeff * v_var(sig, j)
        mapping[sig.n + a] = (
            tbar * z_var(sig, a) + Poly.const(nv, zbar[a]) + Fraction(1, 2) * root * lin
        )
    mapping[sig.n + sig.m] = tbar * t_var(sig)
    composed = G.substitute(mapping)
    result = (c1 / tbar**k) * composed + c2 * t_var(sig) ** k
    t_idx = sig.n + sig.m
    if result.divisible_by(t_idx):
        raise AssertionError("composed numerator became divisible by t")
    return result


def exact_linear_fit(target: Poly, basis: Sequence[Poly]) -> tuple[list[Fraction], Poly]:
    """Exact least-structure fit of target by a linear combination of basis.

    Gaussian elimination over the monomial-coefficient equations.  When the
    system is consistent the returned residual is the zero polynomial and the
    coefficients are the unique solution (the bases used here are linearly
    independent); otherwise the coefficients come from the pivot rows of the
    elimination and the nonzero residual is reported for diagnostics.
    """
    k = len(basis)
    monos: set[Exponent] = set(target.terms)
    for b in basis:
        monos |= set(b.terms)
    rows = sorted(monos)
    aug = [
        [b.terms.get(mu, ZERO) for b in basis] + [target.terms.get(mu, ZERO)]
        for mu in rows
    ]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == len(aug):
            break
    coeffs = [ZERO] * k
    for pr, pc in pivots:
        coeffs[pc] = aug[pr][k]
    residual = target
    for c, b in zip(coeffs, basis):
        if c != 0:
            residual = residual - c * b
    return coeffs, residual
