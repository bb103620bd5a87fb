"""Half-space model v (+) z x R_+: group law, metric, orthonormal frame, and
numeric geodesics.

Points carry coordinates (v, z, t) with t > 0.  The group law is

    (v1, z1, t1) (v2, z2, t2)
        = (v1 + sqrt(t1) v2,  z1 + t1 z2 + 1/2 sqrt(t1) [v1, v2],  t1 t2),

the metric at base point (vbar, zbar, tbar) is

    <u, w> = (1/tbar) <u_v, w_v>
           + (1/tbar^2) <u_z + 1/2 [u_v, vbar], w_z + 1/2 [w_v, vbar]>
           + u_t w_t / tbar^2,

and the orthonormal left-invariant frame is E_i = sqrt(t) (d_{e_i}
- 1/2 d_{[e_i, v]}), F_a = t d_{f_a}, A = t d_t.

Arithmetic is dual: the algebraic operations accept exact rationals (square
roots of t must then be rational, so restrict t to perfect squares) as well
as floats.  Geodesics are float-only: the velocity evolves in frame
("body") components by the constant connection coefficients of the
left-invariant metric (Koszul formula on the frame bracket relations), and
the position is reconstructed through the frame.  As vector fields the frame
satisfies

    [E_i, E_j] = sum_a <J_a e_i, e_j> F_a,   [A, E_i] = E_i / 2,
    [A, F_a] = F_a,

with all other brackets zero (direct computation from the coordinate
expressions; note the v-v sign here is opposite to the abstract solvable
bracket of htype, the two algebras being isomorphic via z -> -z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .htype import SpaceSignature
from .rationals import frac, rational_sqrt


def _sqrt(x):
    if isinstance(x, Fraction):
        return rational_sqrt(x)
    return math.sqrt(x)


def _bracket(sig: SpaceSignature, a, b):
    """[a, b] in z for numeric vectors; exact on Fractions, float on floats."""
    out = [0] * sig.m
    for i, x in enumerate(a):
        if x == 0:
            continue
        row = sig.bracket_table[i]
        for j, y in enumerate(b):
            if y == 0:
                continue
            xy = x * y
            zv = row[j]
            for al in range(sig.m):
                if zv[al]:
                    out[al] = out[al] + zv[al] * xy
    return tuple(out)


@dataclass(frozen=True)
class ModelPoint:
    v: tuple
    z: tuple
    t: object  # Fraction or float, strictly positive

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError(f"t must be positive, got {self.t}")

    def coords(self) -> tuple:
        return self.v + self.z + (self.t,)

    def as_array(self) -> np.ndarray:
        return np.array([float(x) for x in self.coords()])


@dataclass(frozen=True)
class TangentVector:
    dv: tuple
    dz: tuple
    dt: object

    def coords(self) -> tuple:
        return self.dv + self.dz + (self.dt,)

    def as_array(self) -> np.ndarray:
        return np.array([float(x) for x in self.coords()])


def point(sig: SpaceSignature, v, z, t) -> ModelPoint:
    v, z = tuple(v), tuple(z)
    if len(v) != sig.n or len(z) != sig.m:
        raise ValueError("component of wrong length")
    return ModelPoint(v=v, z=z, t=t)


def rational_point(sig: SpaceSignature, v, z, t) -> ModelPoint:
    return point(sig, tuple(frac(x) for x in v), tuple(frac(x) for x in z), frac(t))


def point_from_array(sig: SpaceSignature, x) -> ModelPoint:
    x = list(x)
    return point(sig, x[: sig.n], x[sig.n : sig.n + sig.m], x[-1])


def identity_point(sig: SpaceSignature) -> ModelPoint:
    one = Fraction(1)
    return point(sig, (Fraction(0),) * sig.n, (Fraction(0),) * sig.m, one)


def group_multiply(sig: SpaceSignature, p: ModelPoint, q: ModelPoint) -> ModelPoint:
    root = _sqrt(p.t)
    v = tuple(a + root * b for a, b in zip(p.v, q.v))
    br = _bracket(sig, p.v, q.v)
    z = tuple(
        z1 + p.t * z2 + root * b / 2 for z1, z2, b in zip(p.z, q.z, br)
    )
    return point(sig, v, z, p.t * q.t)


def group_inverse(sig: SpaceSignature, p: ModelPoint) -> ModelPoint:
    root = _sqrt(p.t)
    v = tuple(-x / root for x in p.v)
    z = tuple(-x / p.t for x in p.z)
    return point(sig, v, z, 1 / p.t)


def left_translate(sig: SpaceSignature, g: ModelPoint, p: ModelPoint) -> ModelPoint:
    return group_multiply(sig, g, p)


def left_translate_diff(sig: SpaceSignature, g: ModelPoint, u: TangentVector) -> TangentVector:
    """Differential of the affine extension of the left translation by g."""
    root = _sqrt(g.t)
    dv = tuple(root * x for x in u.dv)
    br = _bracket(sig, g.v, u.dv)
    dz = tuple(g.t * x + root * b / 2 for x, b in zip(u.dz, br))
    return TangentVector(dv=dv, dz=dz, dt=g.t * u.dt)


def metric_at(sig: SpaceSignature, p: ModelPoint, u: TangentVector, w: TangentVector):
    tbar = p.t
    term_v = sum(a * b for a, b in zip(u.dv, w.dv))
    bu = _bracket(sig, u.dv, p.v)
    bw = _bracket(sig, w.dv, p.v)
    zu = [a + b / 2 for a, b in zip(u.dz, bu)]
    zw = [a + b / 2 for a, b in zip(w.dz, bw)]
    term_z = sum(a * b for a, b in zip(zu, zw))
    return term_v / tbar + (term_z + u.dt * w.dt) / (tbar * tbar)


def left_invariant_frame(sig: SpaceSignature, p: ModelPoint) -> list[TangentVector]:
    """E_1..E_n, F_1..F_m, A at p, orthonormal under metric_at."""
    root = _sqrt(p.t)
    zero_v = (0 * root,) * sig.n
    zero_z = (0 * root,) * sig.m
    frame = []
    for i in range(sig.n):
        ei = tuple(1 if j == i else 0 for j in range(sig.n))
        br = _bracket(sig, ei, p.v)  # [e_i, v]
        dv = tuple(root if j == i else 0 * root for j in range(sig.n))
        dz = tuple(-root * b / 2 for b in br)
        frame.append(TangentVector(dv=dv, dz=dz, dt=0 * root))
    for a in range(sig.m):
        dz = tuple(p.t if b == a else 0 * p.t for b in range(sig.m))
        frame.append(TangentVector(dv=zero_v, dz=dz, dt=0 * p.t))
    frame.append(TangentVector(dv=zero_v, dz=zero_z, dt=p.t))
    return frame


def frame_matrix(sig: SpaceSignature, x: np.ndarray) -> np.ndarray:
    """Coordinate components of the frame as columns; x = (v, z, t) floats."""
    n, m, d = sig.n, sig.m, sig.dim
    v, t = x[:n], float(x[-1])
    root = math.sqrt(t)
    M = np.zeros((d, d))
    M[:n, :n] = root * np.eye(n)
    if m:
        jv = sig.j_stack @ v  # (m, n): row a is J_a v
        M[n : n + m, :n] = 0.5 * root * jv
        M[n : n + m, n : n + m] = t * np.eye(m)
    M[-1, -1] = t
    return M


def metric_matrix(sig: SpaceSignature, x: np.ndarray) -> np.ndarray:
    """Metric in coordinates at x, assembled from the closed-form blocks."""
    n, m, d = sig.n, sig.m, sig.dim
    v, t = x[:n], float(x[-1])
    g = np.zeros((d, d))
    if m:
        C = -0.5 * (sig.j_stack @ v)  # C[a, i] = 1/2 [e_i, v]^a
        g[:n, :n] = np.eye(n) / t + (C.T @ C) / t**2
        g[:n, n : n + m] = C.T / t**2
        g[n : n + m, :n] = C / t**2
        g[n : n + m, n : n + m] = np.eye(m) / t**2
    else:
        g[:n, :n] = np.eye(n) / t
    g[-1, -1] = 1.0 / t**2
    return g


def frame_structure_constants(sig: SpaceSignature) -> np.ndarray:
    """c[a, b, c] with [X_a, X_b] = sum_c c[a,b,c] X_c for the frame fields."""
    n, m, d = sig.n, sig.m, sig.dim
    c = np.zeros((d, d, d))
    for i in range(n):
        for j in range(n):
            for a in range(m):
                val = float(sig.bracket_table[i][j][a])
                if val:
                    c[i, j, n + a] = val
    for i in range(n):
        c[d - 1, i, i] = 0.5
        c[i, d - 1, i] = -0.5
    for a in range(m):
        c[d - 1, n + a, n + a] = 1.0
        c[n + a, d - 1, n + a] = -1.0
    return c


def connection_coefficients(sig: SpaceSignature) -> np.ndarray:
    """Gamma[a, b, c] = <nabla_{X_a} X_b, X_c> from the Koszul formula,

        Gamma[a,b,c] = 1/2 (c[a,b,c] - c[b,c,a] + c[c,a,b]).

    np.transpose axes: transpose(C, (2,0,1))[a,b,c] = C[b,c,a] and
    transpose(C, (1,2,0))[a,b,c] = C[c,a,b].
    """
    c = frame_structure_constants(sig)
    return 0.5 * (c - np.transpose(c, (2, 0, 1)) + np.transpose(c, (1, 2, 0)))


class GeodesicTruncation(RuntimeError):
    """Raised when an integrated path leaves the model (t -> 0)."""


@dataclass
class GeodesicPath:
    s: np.ndarray            # (S+1,) arclength samples
    points: np.ndarray       # (S+1, dim) coordinates
    speed_error: np.ndarray  # (S+1,) |  |u| - 1 |, a diagnostic, never corrected

    def end_point(self, sig: SpaceSignature) -> ModelPoint:
        return point_from_array(sig, self.points[-1])


class GeodesicIntegrator:
    """Classical fixed-step 4th-order integrator for unit-speed geodesics."""

    def __init__(self, sig: SpaceSignature):
        self.sig = sig
        self.gamma = connection_coefficients(sig)
        self.n, self.m, self.dim = sig.n, sig.m, sig.dim

    def tangent_to_frame(self, p: ModelPoint, u: TangentVector) -> np.ndarray:
        M = frame_matrix(self.sig, p.as_array())
        return np.linalg.solve(M, u.as_array())

    def _rhs(self, X: np.ndarray, U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n, m = self.n, self.m
        t = X[:, -1]
        if np.any(t <= 0):
            raise GeodesicTruncation("path reached t <= 0")
        root = np.sqrt(t)
        dX = np.zeros_like(X)
        dX[:, :n] = root[:, None] * U[:, :n]
        if m:
            jv = np.einsum("aij,rj->rai", self.sig.j_stack, X[:, :n])
            dX[:, n : n + m] = t[:, None] * U[:, n : n + m] + 0.5 * root[:, None] * np.einsum(
                "rai,ri->ra", jv, U[:, :n]
            )
        dX[:, -1] = t * U[:, -1]
        dU = -np.einsum("ra,rb,abc->rc", U, U, self.gamma)
        return dX, dU

    def flow_batch(
        self, X0: np.ndarray, U0: np.ndarray, s_max: float, steps: int
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Integrate rays in parallel; U0 holds frame components, normalized once.

        Returns (s, X, speed_error) with X of shape (steps+1, rays, dim).
        """
        if steps < 1:
            raise ValueError("steps must be >= 1")
        X = np.array(X0, dtype=float, copy=True)
        norms = np.linalg.norm(U0, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero initial velocity")
        U = np.array(U0, dtype=float) / norms[:, None]
        h = s_max / steps
        out_x = np.empty((steps + 1,) + X.shape)
        out_err = np.empty((steps + 1, X.shape[0]))
        out_x[0] = X
        out_err[0] = np.abs(np.linalg.norm(U, axis=1) - 1.0)
        for k in range(steps):
            k1x, k1u = self._rhs(X, U)
            k2x, k2u = self._rhs(X + 0.5 * h * k1x, U + 0.5 * h * k1u)
            k3x, k3u = self._rhs(X + 0.5 * h * k2x, U + 0.5 * h * k2u)
            k4x, k4u = self._rhs(X + h * k3x, U + h * k3u)
            X = X + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
            U = U + (h / 6.0) * (k1u + 2 * k2u + 2 * k3u + k4u)
            out_x[k + 1] = X
            out_err[k + 1] = np.abs(np.linalg.norm(U, axis=1) - 1.0)
        s = np.linspace(0.0, s_max, steps + 1)
        return s, out_x, out_err


def geodesic_flow(
    sig: SpaceSignature, p0: ModelPoint, u0: TangentVector, s_max: float, steps: int
) -> GeodesicPath:
    """Integrate one unit-speed geodesic; u0 is normalized once, drift reported."""
    integ = GeodesicIntegrator(sig)
    if s_max == 0:
        x = p0.as_array()[None, :]
        return GeodesicPath(s=np.zeros(1), points=x, speed_error=np.zeros(1))
    u_frame = integ.tangent_to_frame(p0, u0)
    s, X, err = integ.flow_batch(p0.as_array()[None, :], u_frame[None, :], s_max, steps)
    return GeodesicPath(s=s, points=X[:, 0, :], speed_error=err[:, 0])
