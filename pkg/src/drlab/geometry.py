"""Focal varieties, tube radii, and mean curvature of regular level sets.

For a normalized quartic family member with parameter lam > 0 the function
attains its minimum 4 lam exactly on the focal set

    z = z0 + 1/2 [v0, v],   P+(v - v0) = 0,   t = 2 lam - 1/4 |P-(v - v0)|^2,

regular levels c > 4 lam are tubes of radius r(c) = arcosh(c / (4 lam)) about
it, and the trace of the shape operator of the level hypersurface (unit
normal grad F / sqrt(b o F)) has the closed form

    h(r) = -(m + n/2) coth r - 1/2 (n+ - n-) cosech r.

mean_curvature() evaluates h along two independent routes, the closed form
and (-2 a(c) + b'(c)) / (2 sqrt(b(c))) with a(x) = (m + n/2 + 1) x
+ 2 lam (n+ - n-), b(x) = x^2 - 16 lam^2, and asserts agreement to 1e-12.
mean_curvature_numeric() is the fully independent oracle: the negative
coordinate divergence of the unit normal, by central finite differences of
sqrt(det g) N^mu.  The overall sign is pinned by the horosphere calibration
(h = -(m + n/2) for the constant-numerator family) and then frozen in
_SHAPE_TRACE_SIGN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .htype import SpaceSignature, bracket_vv
from .model import ModelPoint, TangentVector, frame_matrix, metric_matrix, point
from .poly import PolyFraction
from .rationals import frac, vec
from .verify.families import KIND_SPHERELIKE, FamilySpec
from .verify.residuals import TransnormalFit

# Frozen after calibrating the divergence oracle on the horosphere case.
_SHAPE_TRACE_SIGN = -1.0


@dataclass(frozen=True)
class TubeProfile:
    lam: float
    m: int
    n: int
    n_plus: int
    n_minus: int

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("tube profile needs lam > 0")

    @property
    def c0(self) -> float:
        return 4.0 * self.lam

    def level_of_radius(self, r: float) -> float:
        return 4.0 * self.lam * math.cosh(r)

    def radius_of_level(self, c: float) -> float:
        if c <= self.c0:
            raise ValueError(f"level {c} not above the minimum {self.c0}")
        return math.acosh(c / (4.0 * self.lam))


def profile_from_spec(sig: SpaceSignature, spec: FamilySpec) -> TubeProfile:
    if spec.kind != KIND_SPHERELIKE:
        raise ValueError("tube profiles exist for the quartic family only")
    return TubeProfile(
        lam=float(spec.lam),
        m=sig.m,
        n=sig.n,
        n_plus=len(spec.plus_indices),
        n_minus=len(spec.minus_indices),
    )


def tube_radius_map(lam: float, c: float) -> float:
    """r(c) = arcosh(c / (4 lam)) for c > 4 lam; inverse of c(r) = 4 lam cosh r."""
    lam = float(lam)
    if lam <= 0:
        raise ValueError("lam must be positive")
    if c <= 4.0 * lam:
        raise ValueError(f"level {c} must exceed 4*lam = {4.0 * lam}")
    return math.acosh(c / (4.0 * lam))


def focal_regime(spec: FamilySpec) -> str:
    """Reports distinguish the lam = 0 case instead of erroring."""
    return "horosphere_regime_empty_focal_variety" if spec.lam == 0 else "tube"


def focal_point(sig: SpaceSignature, spec: FamilySpec, w) -> ModelPoint:
    """Exact point of the focal set for a minus-side offset w, |w|^2 < 8 lam."""
    if spec.kind != KIND_SPHERELIKE:
        raise ValueError("focal points exist for the quartic family only")
    if spec.lam <= 0:
        raise ValueError("empty focal variety: lam = 0 is the horosphere regime")
    w = vec(w)
    if len(w) != sig.n:
        raise ValueError("offset of wrong length")
    if any(w[i] != 0 for i in spec.plus_indices):
        raise ValueError("offset must lie in the minus summand")
    norm_sq = sum(x * x for x in w)
    if norm_sq >= 8 * spec.lam:
        raise ValueError("offset leaves the model: |w|^2 >= 8 lam")
    v0 = vec(spec.v0)
    z0 = vec(spec.z0)
    v = tuple(a + b for a, b in zip(v0, w))
    br = bracket_vv(sig, v0, v)  # = [v0, w]
    z = tuple(a + Fraction(1, 2) * b for a, b in zip(z0, br))
    t = 2 * spec.lam - Fraction(1, 4) * norm_sq
    return point(sig, v, z, t)


def focal_tangent_basis(sig: SpaceSignature, spec: FamilySpec, w) -> list[TangentVector]:
    """Coordinate tangent vectors of the focal-set parametrization at offset w."""
    w = vec(w)
    v0 = vec(spec.v0)
    out = []
    for j in spec.minus_indices:
        ej = tuple(Fraction(1 if i == j else 0) for i in range(sig.n))
        dz = tuple(Fraction(1, 2) * b for b in bracket_vv(sig, v0, ej))
        dt = -Fraction(1, 2) * w[j]
        out.append(TangentVector(dv=ej, dz=dz, dt=dt))
    return out


def normal_frame_directions(
    sig: SpaceSignature, spec: FamilySpec, w, rng: np.random.Generator, count: int
) -> tuple[ModelPoint, np.ndarray]:
    """Random unit directions normal to the focal set at its point over w,
    in frame components (where the metric is Euclidean)."""
    p = focal_point(sig, spec, w)
    M = frame_matrix(sig, p.as_array())
    tangent = focal_tangent_basis(sig, spec, w)
    T = np.array([np.linalg.solve(M, tv.as_array()) for tv in tangent])
    if len(T):
        Q, _ = np.linalg.qr(T.T)  # columns span the tangent space
    dirs = np.empty((count, sig.dim))
    for i in range(count):
        u = rng.standard_normal(sig.dim)
        if len(T):
            u = u - Q @ (Q.T @ u)
        dirs[i] = u / np.linalg.norm(u)
    return p, dirs


# -- mean curvature -----------------------------------------------------------


def mean_curvature_closed(profile: TubeProfile, r: float) -> float:
    if r <= 0:
        raise ValueError("radius must be positive")
    return -(profile.m + profile.n / 2.0) / math.tanh(r) - 0.5 * (
        profile.n_plus - profile.n_minus
    ) / math.sinh(r)


def mean_curvature_ab_route(profile: TubeProfile, r: float) -> float:
    """(-2 a(c) + b'(c)) / (2 sqrt(b(c))) at c = 4 lam cosh r."""
    if r <= 0:
        raise ValueError("radius must be positive")
    lam = profile.lam
    c = 4.0 * lam * math.cosh(r)
    a = (profile.m + profile.n / 2.0 + 1.0) * c + 2.0 * lam * (
        profile.n_plus - profile.n_minus
    )
    b = c * c - 16.0 * lam * lam
    return (-2.0 * a + 2.0 * c) / (2.0 * math.sqrt(b))


def mean_curvature(profile: TubeProfile, r: float, tol: float = 1e-12) -> float:
    """Both routes, agreement asserted to tol; returns the closed form."""
    closed = mean_curvature_closed(profile, r)
    ab = mean_curvature_ab_route(profile, r)
    if abs(closed - ab) > tol * (1.0 + abs(closed)):
        raise AssertionError(f"mean curvature routes disagree: {closed} vs {ab}")
    return closed


class LevelSetOracle:
    """Numeric companion of one candidate F = G / t^k with a fitted b."""

    def __init__(self, sig: SpaceSignature, GF: PolyFraction, bfit: TransnormalFit):
        self.sig = sig
        self.GF = GF
        self.bfit = bfit
        self._grad_polys = [GF.numerator.diff(j) for j in range(GF.nvars)]

    def value(self, x: np.ndarray) -> float:
        pt = tuple(float(c) for c in x)
        return float(self.GF.numerator.evaluate(pt)) / pt[-1] ** self.GF.k

    def coordinate_gradient(self, x: np.ndarray) -> np.ndarray:
        """dF in coordinates from the exact numerator partials."""
        pt = tuple(float(c) for c in x)
        t = pt[-1]
        k = self.GF.k
        g = np.array([float(p.evaluate(pt)) for p in self._grad_polys])
        out = g / t**k
        out[-1] -= k * float(self.GF.numerator.evaluate(pt)) / t ** (k + 1)
        return out

    def gradient_norm_sq(self, x: np.ndarray) -> float:
        g = metric_matrix(self.sig, x)
        df = self.coordinate_gradient(x)
        return float(df @ np.linalg.solve(g, df))

    def unit_normal_density(self, x: np.ndarray) -> np.ndarray:
        """sqrt(det g) * N^mu with N = grad F / sqrt(b o F)."""
        g = metric_matrix(self.sig, x)
        df = self.coordinate_gradient(x)
        grad = np.linalg.solve(g, df)
        b = self.bfit.b_value(self.value(x))
        if b <= 0:
            raise ValueError("b(F) <= 0: nearly singular point")
        det = np.linalg.det(g)
        return math.sqrt(det) * grad / math.sqrt(b)

    def shape_trace_numeric(self, x: np.ndarray, step: float = 1e-4) -> float:
        """Trace of the shape operator via the divergence of the unit normal."""
        if self.gradient_norm_sq(x) <= 1e-12:
            raise ValueError("point is not regular enough for the divergence oracle")
        g = metric_matrix(self.sig, x)
        det = np.linalg.det(g)
        div = 0.0
        for mu in range(self.sig.dim):
            xp, xm = x.copy(), x.copy()
            xp[mu] += step
            xm[mu] -= step
            div += (
                self.unit_normal_density(xp)[mu] - self.unit_normal_density(xm)[mu]
            ) / (2.0 * step)
        return _SHAPE_TRACE_SIGN * div / math.sqrt(det)


def frame_gradient_norm_sq_fd(
    sig: SpaceSignature, GF: PolyFraction, x: np.ndarray, h: float = 1e-3
) -> float:
    """|grad F|^2 through the orthonormal frame, with all coordinate partials
    taken by 5-point Richardson differences of plain evaluations of F.

    This shares nothing with the polynomial-identity pipeline except the
    ability to evaluate F, so it serves as its independent spot check.  The
    5-point stencil is exact (up to roundoff) in the v and z directions,
    where F is polynomial of degree <= 4.
    """

    def F(y: np.ndarray) -> float:
        pt = tuple(float(c) for c in y)
        return float(GF.numerator.evaluate(pt)) / pt[-1] ** GF.k

    d = sig.dim
    partials = np.empty(d)
    for j in range(d):
        hp = h * max(1.0, abs(float(x[j])))
        ys = []
        for delta in (-2 * hp, -hp, hp, 2 * hp):
            y = x.copy()
            y[j] += delta
            ys.append(F(y))
        partials[j] = (8.0 * (ys[2] - ys[1]) - (ys[3] - ys[0])) / (12.0 * hp)
    n, m = sig.n, sig.m
    v, t = x[:n], float(x[-1])
    root = math.sqrt(t)
    total = 0.0
    if m:
        jv = sig.j_stack @ v  # (m, n); [e_i, v]^a = -(J_a v)_i
    for i in range(n):
        e = partials[i]
        if m:
            e -= 0.5 * sum(-jv[a, i] * partials[n + a] for a in range(m))
        total += (root * e) ** 2
    for a in range(m):
        total += (t * partials[n + a]) ** 2
    total += (t * partials[-1]) ** 2
    return total


def point_on_level(
    sig: SpaceSignature, spec: FamilySpec, c: float, v: np.ndarray | None = None
) -> np.ndarray:
    """A point with F = c on a normalized quartic member (v0 = z0 = 0,
    c1 = 1, c2 = 0), found by solving the t-quadratic along fixed (v, z=0)."""
    if spec.kind != KIND_SPHERELIKE:
        raise ValueError("level finder supports the quartic family only")
    lam = float(spec.lam)
    if v is None:
        v = np.zeros(sig.n)
    q = float(v @ v) / 4.0
    plus = set(spec.plus_indices)
    qform = sum((1.0 if i in plus else -1.0) * v[i] ** 2 for i in range(sig.n))
    s = lam * qform + 4.0 * lam * lam
    disc = (c - 2.0 * q) ** 2 - 4.0 * (q * q + s)
    if disc <= 0:
        raise ValueError("level not reachable along this ray")
    t = ((c - 2.0 * q) + math.sqrt(disc)) / 2.0
    return np.concatenate([v, np.zeros(sig.m), [t]])


def horosphere_shape_trace(sig: SpaceSignature) -> float:
    """Calibration value: h = -(m + n/2) for the constant-numerator family."""
    return -(sig.m + sig.n / 2.0)
