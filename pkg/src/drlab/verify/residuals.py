"""Exact verdicts: transnormality and the Laplace condition as polynomial
identities.

For F = G / t^k both conditions are cleared of denominators:

    transnormality   t^(2k) |grad F|^2 = b2 G^2 + b1 G t^k + b0 t^(2k)
    Laplace          t^k Lap F         = alpha G + a0 t^k

The fits for (b2, b1, b0) and (alpha, a0) are exact linear solves over the
monomial-coefficient equations (the basis polynomials are independent because
G is not divisible by t), and a verdict is true iff the corresponding
residual is the zero polynomial.  For k = 1 a true Laplace verdict forces
alpha = m + n/2 + 1; the fitted value is reported so the suite can pin that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..htype import SpaceSignature
from ..poly import (
    Poly,
    PolyFraction,
    delta_z,
    d_operator,
    exact_linear_fit,
    gradient_norm_numerator,
    laplacian_numerator,
    nvars_of,
    poly_names,
    t_var,
)
from ..rationals import frac, is_square, rational_sqrt
from .families import FamilySpec, bracket_split_condition, family_polynomial


def _pair(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


@dataclass(frozen=True)
class TransnormalFit:
    b2: Fraction
    b1: Fraction
    b0: Fraction
    residual: Poly

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()

    def b_value(self, x: float) -> float:
        return float(self.b2) * x * x + float(self.b1) * x + float(self.b0)

    def b_derivative(self, x: float) -> float:
        return 2.0 * float(self.b2) * x + float(self.b1)


@dataclass(frozen=True)
class LaplaceFit:
    alpha: Fraction
    a0: Fraction
    residual: Poly

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()

    def a_value(self, x: float) -> float:
        return float(self.alpha) * x + float(self.a0)


@dataclass(frozen=True)
class VerificationReport:
    n: int
    m: int
    k: int
    transnormal: TransnormalFit
    laplace: LaplaceFit

    @property
    def isoparametric(self) -> bool:
        return self.transnormal.holds and self.laplace.holds

    @property
    def lambda_sq_recovered(self) -> Fraction:
        """(b1^2 - 4 b0) / 64; the square of the recovered family parameter."""
        return (self.transnormal.b1**2 - 4 * self.transnormal.b0) / 64

    @property
    def lambda_recovered(self):
        ls = self.lambda_sq_recovered
        if ls < 0:
            return None
        if is_square(ls):
            return rational_sqrt(ls)
        return float(ls) ** 0.5

    def to_json_dict(self, residual_limit: int = 10) -> dict:
        names = poly_names(self.n, self.m)

        def residual_block(res: Poly) -> dict:
            sample = [
                f"{c}*" + "*".join(
                    nm if e == 1 else f"{nm}^{e}"
                    for nm, e in zip(names, exps)
                    if e
                ) if any(exps) else str(c)
                for exps, c in res.sorted_terms()[:residual_limit]
            ]
            return {"monomial_count": len(res.terms), "monomials": sample}

        lam = self.lambda_recovered
        return {
            "schema": "drlab.verify-report/1",
            "space": {"m": self.m, "n": self.n},
            "k": self.k,
            "transnormal": {
                "holds": self.transnormal.holds,
                "b2": _pair(self.transnormal.b2),
                "b1": _pair(self.transnormal.b1),
                "b0": _pair(self.transnormal.b0),
                "residual": residual_block(self.transnormal.residual),
            },
            "laplace": {
                "holds": self.laplace.holds,
                "alpha": _pair(self.laplace.alpha),
                "a0": _pair(self.laplace.a0),
                "residual": residual_block(self.laplace.residual),
            },
            "isoparametric": self.isoparametric,
            "lambda_sq_recovered": _pair(self.lambda_sq_recovered),
            "lambda_recovered": (
                _pair(lam) if isinstance(lam, Fraction) else lam
            ),
        }


def transnormal_residual(sig: SpaceSignature, GF: PolyFraction) -> TransnormalFit:
    """Fit |grad F|^2 = b(F) with b quadratic and return the exact residual."""
    G, k = GF.numerator, GF.k
    lhs = gradient_norm_numerator(sig, G, k)
    tk = t_var(sig) ** k
    basis = [G * G, G * tk, tk * tk]
    (b2, b1, b0), residual = exact_linear_fit(lhs, basis)
    return TransnormalFit(b2=b2, b1=b1, b0=b0, residual=residual)


def laplace_residual(sig: SpaceSignature, GF: PolyFraction) -> LaplaceFit:
    """Fit Lap F = alpha F + a0 and return the exact residual."""
    G, k = GF.numerator, GF.k
    lhs = laplacian_numerator(sig, G, k)
    tk = t_var(sig) ** k
    (alpha, a0), residual = exact_linear_fit(lhs, [G, tk])
    return LaplaceFit(alpha=alpha, a0=a0, residual=residual)


def verify_candidate(sig: SpaceSignature, GF: PolyFraction) -> VerificationReport:
    return VerificationReport(
        n=sig.n,
        m=sig.m,
        k=GF.k,
        transnormal=transnormal_residual(sig, GF),
        laplace=laplace_residual(sig, GF),
    )


def verify_family(sig: SpaceSignature, spec: FamilySpec) -> VerificationReport:
    return verify_candidate(sig, family_polynomial(sig, spec))


def eigenvalue_slope(sig: SpaceSignature) -> Fraction:
    """m + n/2 + 1, the forced Laplace slope for denominator power 1."""
    return Fraction(sig.m) + Fraction(sig.n, 2) + 1


# -- recursion ----------------------------------------------------------------


@dataclass(frozen=True)
class RecursionResult:
    coefficients: tuple[Poly, ...]      # G_0 .. G_r, no t dependence
    assembled: Poly                     # sum G_j t^j
    boundary_top: Poly                  # D G_r + Delta_z G_{r-1}
    boundary_z: Poly                    # Delta_z G_r

    @property
    def boundary_clean(self) -> bool:
        return self.boundary_top.is_zero() and self.boundary_z.is_zero()


def laplace_recursion(sig: SpaceSignature, G0: Poly, a0, r: int) -> RecursionResult:
    """Build G_1 (and G_2 for r = 2) from G_0 by the coefficient recursion

        G_1 = (D G_0 - a0) / (m + n/2 + 1),
        G_{j+1} = (D G_j + Delta_z G_{j-1}) / ((m + n/2 - j + 1)(j + 1)),

    and report the two boundary residuals whose vanishing certifies the
    Laplace condition for the assembled polynomial.
    """
    if r not in (1, 2):
        raise ValueError("r must be 1 or 2")
    t_idx = sig.n + sig.m
    if G0.max_degree(t_idx) != 0:
        raise ValueError("G0 must not involve t")
    a0 = frac(a0)
    half_n = Fraction(sig.n, 2)
    coeffs = [G0]
    g1 = (d_operator(sig, G0) - Poly.const(nvars_of(sig), a0)) * (
        1 / (Fraction(sig.m) + half_n + 1)
    )
    coeffs.append(g1)
    if r == 2:
        denom = (Fraction(sig.m) + half_n) * 2
        g2 = (d_operator(sig, g1) + delta_z(sig, G0)) * (1 / denom)
        coeffs.append(g2)
    top = d_operator(sig, coeffs[r]) + delta_z(sig, coeffs[r - 1])
    bz = delta_z(sig, coeffs[r])
    t = t_var(sig)
    assembled = coeffs[0]
    power = Poly.const(nvars_of(sig), 1)
    for j in range(1, r + 1):
        power = power * t
        assembled = assembled + coeffs[j] * power
    return RecursionResult(
        coefficients=tuple(coeffs),
        assembled=assembled,
        boundary_top=top,
        boundary_z=bz,
    )


# -- the two-sided split check -------------------------------------------------


@dataclass(frozen=True)
class SplitCheckReport:
    bracket_condition: bool
    transnormal: bool
    laplace: bool
    report: VerificationReport


def prop64_check(sig: SpaceSignature, v1_basis, v2_basis) -> SplitCheckReport:
    """Run the quartic / t^2 candidate for an orthogonal split v = v1 (+) v2.

    Checks the exchange condition J_z v1 <= v2, J_z v2 <= v1 on generator
    images and the two polynomial identities for the induced candidate; the
    expected pattern is transnormal <=> exchange condition, and the Laplace
    condition only ever holds for m = 1 with the even split.
    """
    from .families import generalized_64

    spec = generalized_64(sig, v1_basis, v2_basis)
    GF = family_polynomial(sig, spec)  # validates orthogonality and spanning
    cond = bracket_split_condition(sig, spec.v1_basis, spec.v2_basis)
    rep = verify_candidate(sig, GF)
    return SplitCheckReport(
        bracket_condition=cond,
        transnormal=rep.transnormal.holds,
        laplace=rep.laplace.holds,
        report=rep,
    )
