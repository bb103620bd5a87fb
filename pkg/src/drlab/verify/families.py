"""Candidate families of level-set functions G / t^k on a fixed space.

Kinds and their numerators G (denominator power k in parentheses):

    horosphere_i    (1)  c1 + c2 t
    tube_ii         (1)  c1 |P_w v - w0|^2 + c2 t
    spherelike_iii  (1)  c1 ((t + |(v - v0)/2|^2)^2 + |z - z0 + 1/2 [v, v0]|^2
                              + lam <v - v0, (P+ - P-)(v - v0)> + 4 lam^2) + c2 t
    distance_like   (1)  (t + t0 + |(v - v0)/2|^2)^2 + |z - z0 + 1/2 [v, v0]|^2
    chk_real_tube   (2)  (t + 1/2 |P2 v|^2)^2 + |z - 1/2 [P1 v, P2 v]|^2,
                         P1/P2 the odd/even coordinate split (m = 1, n even)
    generalized_64  (2)  same shape for an arbitrary orthogonal split v1 (+) v2

For spherelike_iii the splitting must consist of exactly generator-invariant
index sets and lam >= 0; mutated variants that deliberately break those rules
are produced by mutant_candidates() for the negative-control suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..clifford import indices_invariant
from ..htype import SpaceSignature
from ..poly import (
    Poly,
    PolyFraction,
    bracket_poly_vec,
    const,
    nvars_of,
    t_var,
    v_var,
    z_var,
)
from ..rationals import (
    Vec,
    dot,
    frac,
    mat_vec,
    orthogonalize,
    projection_matrix,
    vec,
)

KIND_HOROSPHERE = "horosphere_i"
KIND_TUBE = "tube_ii"
KIND_SPHERELIKE = "spherelike_iii"
KIND_DISTANCE = "distance_like"
KIND_CHK = "chk_real_tube"
KIND_GENERAL64 = "generalized_64"

KINDS = (
    KIND_HOROSPHERE,
    KIND_TUBE,
    KIND_SPHERELIKE,
    KIND_DISTANCE,
    KIND_CHK,
    KIND_GENERAL64,
)


@dataclass(frozen=True)
class FamilySpec:
    """Tagged parameter record selecting one family member."""

    kind: str
    c1: Fraction = Fraction(1)
    c2: Fraction = Fraction(0)
    w_basis: tuple[Vec, ...] | None = None  # tube_ii
    w0: Vec | None = None                    # tube_ii
    v0: Vec | None = None                    # spherelike_iii, distance_like
    z0: Vec | None = None
    t0: Fraction | None = None               # distance_like
    lam: Fraction = Fraction(0)              # spherelike_iii
    plus_indices: tuple[int, ...] | None = None
    minus_indices: tuple[int, ...] | None = None
    v1_basis: tuple[Vec, ...] | None = None  # generalized_64
    v2_basis: tuple[Vec, ...] | None = None

    @property
    def k(self) -> int:
        return 2 if self.kind in (KIND_CHK, KIND_GENERAL64) else 1

    def describe(self) -> str:
        bits = [self.kind]
        if self.kind == KIND_SPHERELIKE:
            bits.append(f"lam={self.lam}")
            if self.plus_indices is not None:
                bits.append(f"n+={len(self.plus_indices)}")
        if self.c1 != 1 or self.c2 != 0:
            bits.append(f"c1={self.c1},c2={self.c2}")
        return " ".join(bits)


def horosphere(c1=1, c2=0) -> FamilySpec:
    return FamilySpec(kind=KIND_HOROSPHERE, c1=frac(c1), c2=frac(c2))


def tube(w_basis, w0, c1=1, c2=0) -> FamilySpec:
    return FamilySpec(
        kind=KIND_TUBE,
        c1=frac(c1),
        c2=frac(c2),
        w_basis=tuple(vec(b) for b in w_basis),
        w0=vec(w0),
    )


def spherelike(
    sig: SpaceSignature,
    lam,
    plus_indices,
    minus_indices=None,
    v0=None,
    z0=None,
    c1=1,
    c2=0,
) -> FamilySpec:
    plus = tuple(plus_indices)
    if minus_indices is None:
        minus_indices = tuple(i for i in range(sig.n) if i not in set(plus))
    return FamilySpec(
        kind=KIND_SPHERELIKE,
        c1=frac(c1),
        c2=frac(c2),
        lam=frac(lam),
        plus_indices=plus,
        minus_indices=tuple(minus_indices),
        v0=vec(v0) if v0 is not None else (Fraction(0),) * sig.n,
        z0=vec(z0) if z0 is not None else (Fraction(0),) * sig.m,
    )


def distance_like(sig: SpaceSignature, v0=None, z0=None, t0=1) -> FamilySpec:
    return FamilySpec(
        kind=KIND_DISTANCE,
        v0=vec(v0) if v0 is not None else (Fraction(0),) * sig.n,
        z0=vec(z0) if z0 is not None else (Fraction(0),) * sig.m,
        t0=frac(t0),
    )


def chk_real_tube(sig: SpaceSignature) -> FamilySpec:
    return FamilySpec(kind=KIND_CHK)


def generalized_64(sig: SpaceSignature, v1_basis, v2_basis) -> FamilySpec:
    return FamilySpec(
        kind=KIND_GENERAL64,
        v1_basis=tuple(vec(b) for b in v1_basis),
        v2_basis=tuple(vec(b) for b in v2_basis),
    )


def general64_from_indices(sig: SpaceSignature, idx1) -> FamilySpec:
    idx1 = tuple(idx1)
    idx2 = tuple(i for i in range(sig.n) if i not in set(idx1))
    e = lambda i: tuple(Fraction(1 if j == i else 0) for j in range(sig.n))
    return generalized_64(sig, [e(i) for i in idx1], [e(i) for i in idx2])


# -- polynomial builders -----------------------------------------------------


def _v_minus(sig: SpaceSignature, v0: Vec) -> list[Poly]:
    nv = nvars_of(sig)
    return [v_var(sig, i) - Poly.const(nv, v0[i]) for i in range(sig.n)]


def _bracket_with_const(sig: SpaceSignature, v0: Vec) -> list[Poly]:
    """[v, v0] componentwise as linear polynomials in v."""
    nv = nvars_of(sig)
    out = []
    for a in range(sig.m):
        p = Poly.zero(nv)
        for i in range(sig.n):
            coeff = sum(
                (sig.bracket_table[i][j][a] * v0[j] for j in range(sig.n)), Fraction(0)
            )
            if coeff:
                p = p + coeff * v_var(sig, i)
        out.append(p)
    return out


def _z_term(sig: SpaceSignature, v0: Vec, z0: Vec, cross_coeff=Fraction(1, 2)) -> Poly:
    """|z - z0 + cross_coeff [v, v0]|^2 (cross_coeff 1/2 for the true family)."""
    nv = nvars_of(sig)
    br = _bracket_with_const(sig, v0)
    acc = Poly.zero(nv)
    for a in range(sig.m):
        w = z_var(sig, a) - Poly.const(nv, z0[a]) + cross_coeff * br[a]
        acc = acc + w * w
    return acc


def spherelike_numerator(
    sig: SpaceSignature,
    v0: Vec,
    z0: Vec,
    Q,
    offset,
    c1=Fraction(1),
    c2=Fraction(0),
    cross_coeff=Fraction(1, 2),
    include_z=True,
    extra: Poly | None = None,
) -> Poly:
    """General quartic numerator c1 ((t + |u/2|^2)^2 + zterm + <u, Q u> + offset) + c2 t
    with u = v - v0; Q an arbitrary symmetric rational matrix.

    The true family uses Q = lam (P+ - P-) and offset = 4 lam^2; the extra
    knobs exist so the mutation suite can produce near-miss candidates.
    """
    nv = nvars_of(sig)
    u = _v_minus(sig, v0)
    sq = t_var(sig)
    for ui in u:
        sq = sq + Fraction(1, 4) * (ui * ui)
    acc = sq * sq
    if include_z and sig.m:
        acc = acc + _z_term(sig, v0, z0, cross_coeff)
    for i in range(sig.n):
        for j in range(sig.n):
            if Q[i][j]:
                acc = acc + Q[i][j] * (u[i] * u[j])
    acc = acc + Poly.const(nv, offset)
    if extra is not None:
        acc = acc + extra
    return frac(c1) * acc + frac(c2) * t_var(sig)


def splitting_sign_matrix(sig: SpaceSignature, plus_indices, minus_indices):
    plus = set(plus_indices)
    Q = [[Fraction(0)] * sig.n for _ in range(sig.n)]
    for i in range(sig.n):
        Q[i][i] = Fraction(1) if i in plus else Fraction(-1)
    return tuple(tuple(row) for row in Q)


def _validate_splitting(sig: SpaceSignature, plus, minus):
    if sorted(tuple(plus) + tuple(minus)) != list(range(sig.n)):
        raise ValueError("splitting does not partition the v-basis")
    for side in (plus, minus):
        if not indices_invariant(sig.module, tuple(side)):
            raise ValueError(f"splitting side {tuple(side)} is not generator-invariant")


def general64_numerator(sig: SpaceSignature, P1, P2) -> Poly:
    nv = nvars_of(sig)
    p1 = [
        sum((P1[i][j] * v_var(sig, j) for j in range(sig.n)), Poly.zero(nv))
        for i in range(sig.n)
    ]
    p2 = [
        sum((P2[i][j] * v_var(sig, j) for j in range(sig.n)), Poly.zero(nv))
        for i in range(sig.n)
    ]
    sq = t_var(sig)
    for pi in p2:
        sq = sq + Fraction(1, 2) * (pi * pi)
    acc = sq * sq
    br = bracket_poly_vec(sig, p1, p2)
    for a in range(sig.m):
        w = z_var(sig, a) - Fraction(1, 2) * br[a]
        acc = acc + w * w
    return acc


def family_polynomial(sig: SpaceSignature, spec: FamilySpec) -> PolyFraction:
    """Exact numerator/denominator of the selected family member."""
    nv = nvars_of(sig)
    if spec.kind == KIND_HOROSPHERE:
        if spec.c1 == 0:
            raise ValueError("c1 must be nonzero")
        return PolyFraction(const(sig, spec.c1) + spec.c2 * t_var(sig), 1)

    if spec.kind == KIND_TUBE:
        if spec.c1 == 0:
            raise ValueError("c1 must be nonzero")
        if not spec.w_basis:
            raise ValueError("tube family needs a nonzero subspace")
        P = projection_matrix(spec.w_basis, sig.n)
        w0 = vec(spec.w0)
        if mat_vec(P, w0) != w0:
            raise ValueError("w0 must lie in the subspace")
        acc = Poly.zero(nv)
        for i in range(sig.n):
            qi = (
                sum((P[i][j] * v_var(sig, j) for j in range(sig.n)), Poly.zero(nv))
                - Poly.const(nv, w0[i])
            )
            acc = acc + qi * qi
        return PolyFraction(spec.c1 * acc + spec.c2 * t_var(sig), 1)

    if spec.kind == KIND_SPHERELIKE:
        if spec.c1 == 0:
            raise ValueError("c1 must be nonzero")
        if spec.lam < 0:
            raise ValueError("lam must be >= 0")
        _validate_splitting(sig, spec.plus_indices, spec.minus_indices)
        sign = splitting_sign_matrix(sig, spec.plus_indices, spec.minus_indices)
        Q = tuple(tuple(spec.lam * e for e in row) for row in sign)
        G = spherelike_numerator(
            sig, vec(spec.v0), vec(spec.z0), Q, 4 * spec.lam**2, spec.c1, spec.c2
        )
        return PolyFraction(G, 1)

    if spec.kind == KIND_DISTANCE:
        v0, z0 = vec(spec.v0), vec(spec.z0)
        u = _v_minus(sig, v0)
        sq = t_var(sig) + Poly.const(nv, spec.t0)
        for ui in u:
            sq = sq + Fraction(1, 4) * (ui * ui)
        G = sq * sq
        if sig.m:
            G = G + _z_term(sig, v0, z0)
        return PolyFraction(G, 1)

    if spec.kind == KIND_CHK:
        if sig.m != 1 or sig.n % 2 != 0 or sig.n == 0:
            raise ValueError("chk_real_tube needs m = 1 and n even and positive")
        return family_polynomial(
            sig, general64_from_indices(sig, tuple(range(0, sig.n, 2)))
        )

    if spec.kind == KIND_GENERAL64:
        b1 = list(spec.v1_basis or ())
        b2 = list(spec.v2_basis or ())
        for u in b1:
            for w in b2:
                if dot(u, w) != 0:
                    raise ValueError("splitting subspaces are not orthogonal")
        if len(orthogonalize(b1)) != len(b1) or len(orthogonalize(b2)) != len(b2):
            raise ValueError("splitting basis is dependent")
        if len(b1) + len(b2) != sig.n:
            raise ValueError("splitting does not span v")
        P1 = projection_matrix(b1, sig.n)
        P2 = projection_matrix(b2, sig.n)
        return PolyFraction(general64_numerator(sig, P1, P2), 2)

    raise ValueError(f"unknown family kind {spec.kind!r}")


def bracket_split_condition(sig: SpaceSignature, v1_basis, v2_basis) -> bool:
    """Exactly check J_z v1 <= v2 and J_z v2 <= v1 on generator images."""
    P1 = projection_matrix(v1_basis, sig.n)
    P2 = projection_matrix(v2_basis, sig.n)
    for J in sig.module.generators:
        for b in v1_basis:
            img = mat_vec(J, vec(b))
            if any(x != 0 for x in mat_vec(P1, img)):
                return False
        for b in v2_basis:
            img = mat_vec(J, vec(b))
            if any(x != 0 for x in mat_vec(P2, img)):
                return False
    return True


# -- negative controls --------------------------------------------------------


def mutant_candidates(sig: SpaceSignature, lam=Fraction(1)) -> list[tuple[str, PolyFraction]]:
    """Perturbed spherelike/tube candidates, none of which may verify clean.

    Each entry breaks at least one of the two defining identities; the suite
    asserts that no mutant passes both.
    """
    if sig.n < 2:
        raise ValueError("mutation suite needs n >= 2")
    lam = frac(lam)
    nv = nvars_of(sig)
    zero_v = (Fraction(0),) * sig.n
    zero_z = (Fraction(0),) * sig.m
    lam_id = tuple(
        tuple(lam if i == j else Fraction(0) for j in range(sig.n)) for i in range(sig.n)
    )
    out: list[tuple[str, PolyFraction]] = []

    # whole lam-dependent part flipped: <u,Qu> + 4 lam^2 -> -(...)
    neg_q = tuple(tuple(-e for e in row) for row in lam_id)
    out.append(
        (
            "lambda_part_sign_flipped",
            PolyFraction(
                spherelike_numerator(sig, zero_v, zero_z, neg_q, -4 * lam**2), 1
            ),
        )
    )

    if sig.m:
        # symmetric involution whose eigenspaces no generator preserves
        alt = tuple(
            tuple(
                (lam if i % 2 == 0 else -lam) if i == j else Fraction(0)
                for j in range(sig.n)
            )
            for i in range(sig.n)
        )
        out.append(
            (
                "non_invariant_splitting",
                PolyFraction(
                    spherelike_numerator(sig, zero_v, zero_z, alt, 4 * lam**2), 1
                ),
            )
        )
        # z-term dropped entirely
        out.append(
            (
                "z_term_dropped",
                PolyFraction(
                    spherelike_numerator(
                        sig, zero_v, zero_z, lam_id, 4 * lam**2, include_z=False
                    ),
                    1,
                ),
            )
        )
        # cross-term coefficient 1 instead of 1/2 (needs v0 != 0)
        v0 = tuple(Fraction(1 if i == 0 else 0) for i in range(sig.n))
        out.append(
            (
                "cross_term_coefficient_altered",
                PolyFraction(
                    spherelike_numerator(
                        sig, v0, zero_z, lam_id, 4 * lam**2, cross_coeff=Fraction(1)
                    ),
                    1,
                ),
            )
        )

    # degree-3 term in t
    out.append(
        (
            "cubic_t_term_added",
            PolyFraction(
                spherelike_numerator(
                    sig,
                    zero_v,
                    zero_z,
                    lam_id,
                    4 * lam**2,
                    extra=t_var(sig) ** 3,
                ),
                1,
            ),
        )
    )

    # tube with center outside the subspace (projection-shift leaves a constant)
    w_basis = [tuple(Fraction(1 if j == 0 else 0) for j in range(sig.n))]
    w0_out = tuple(Fraction(1) if j <= 1 else Fraction(0) for j in range(sig.n))
    P = projection_matrix(w_basis, sig.n)
    acc = Poly.zero(nv)
    for i in range(sig.n):
        qi = (
            sum((P[i][j] * v_var(sig, j) for j in range(sig.n)), Poly.zero(nv))
            - Poly.const(nv, w0_out[i])
        )
        acc = acc + qi * qi
    out.append(("w0_outside_subspace", PolyFraction(acc + t_var(sig), 1)))
    return out
