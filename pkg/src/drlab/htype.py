"""Two-step nilpotent algebra n = v (+) z from a Clifford module, and its
solvable extension s = v (+) z (+) R a.

The bracket on v is dual to the generator action:

    <[v1, v2], z> = <J_z v1, v2>,

so the structure constants are [e_i, e_j]^a = <J_a e_i, e_j> = (J_a)_{ji}.
On the solvable extension the bracket of x_k = v_k + z_k + tau_k a is

    [x1, x2] = (tau1/2) v2 - (tau2/2) v1  (v-part)
               [v2, v1] + tau1 z2 - tau2 z1  (z-part)

with zero a-part.  Note the reversed order [v2, v1] in the z-part; the
coordinate frame fields of the half-space model satisfy the opposite sign
(see model.py), the two conventions being isomorphic via z -> -z.

Everything is exact: structure constants are cached as Fractions at build
time and all downstream operators read them instead of recomputing J
products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .clifford import CliffordModule, build_clifford_module
from .rationals import Vec, dot, frac, vec, zero_vec

ZERO = Fraction(0)


@dataclass(frozen=True)
class AlgebraElement:
    v: Vec
    z: Vec
    tau: Fraction

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.v) and all(x == 0 for x in self.z) and self.tau == 0


class SpaceSignature:
    """Structure constants of s plus basis bookkeeping for one space.

    Attributes:
        module: the underlying CliffordModule.
        n, m, dim: dim v, dim z, and dim s = n + m + 1.
        bracket_table: bracket_table[i][j] is the z-vector [e_i, e_j].
        j_stack: float copy of the generators, shape (m, n, n).
    """

    def __init__(self, module: CliffordModule, bracket_table=None):
        self.module = module
        self.n = module.n
        self.m = module.m
        self.dim = module.n + module.m + 1
        if bracket_table is None:
            bracket_table = tuple(
                tuple(
                    tuple(module.generators[a][j][i] for a in range(module.m))
                    for j in range(module.n)
                )
                for i in range(module.n)
            )
        self.bracket_table = bracket_table
        self.j_stack = np.array(
            [[[float(e) for e in row] for row in g] for g in module.generators], dtype=float
        ).reshape(module.m, module.n, module.n)
        self.labels = (
            tuple(f"e{i + 1}" for i in range(self.n))
            + tuple(f"f{a + 1}" for a in range(self.m))
            + ("a",)
        )

    def with_perturbed_constant(self, i: int, j: int, a: int, delta) -> "SpaceSignature":
        """Copy with bracket_table[i][j][a] shifted by delta (test helper)."""
        table = [[list(zv) for zv in row] for row in self.bracket_table]
        table[i][j][a] += frac(delta)
        frozen = tuple(tuple(tuple(zv) for zv in row) for row in table)
        return SpaceSignature(self.module, bracket_table=frozen)


def build_space(m: int, copies: int) -> SpaceSignature:
    return SpaceSignature(build_clifford_module(m, copies))


def bracket_vv(sig: SpaceSignature, v1, v2) -> Vec:
    """[v1, v2] in z, bilinear and antisymmetric, from cached constants."""
    v1, v2 = vec(v1), vec(v2)
    if len(v1) != sig.n or len(v2) != sig.n:
        raise ValueError("v-vector of wrong length")
    out = [ZERO] * sig.m
    for i, x in enumerate(v1):
        if x == 0:
            continue
        row = sig.bracket_table[i]
        for j, y in enumerate(v2):
            if y == 0:
                continue
            zv = row[j]
            xy = x * y
            for a in range(sig.m):
                if zv[a]:
                    out[a] += xy * zv[a]
    return tuple(out)


def bracket_solvable(sig: SpaceSignature, x1: AlgebraElement, x2: AlgebraElement) -> AlgebraElement:
    """Bracket on s; the a-component of any bracket vanishes."""
    half = Fraction(1, 2)
    vpart = tuple(
        x1.tau * half * b - x2.tau * half * a for a, b in zip(x1.v, x2.v)
    )
    zpart = bracket_vv(sig, x2.v, x1.v)
    zpart = tuple(
        zb + x1.tau * z2 - x2.tau * z1 for zb, z1, z2 in zip(zpart, x1.z, x2.z)
    )
    return AlgebraElement(v=vpart, z=zpart, tau=ZERO)


def basis_element(sig: SpaceSignature, idx: int) -> AlgebraElement:
    """Basis of s in the fixed order (e_1..e_n, f_1..f_m, a)."""
    n, m = sig.n, sig.m
    v = list(zero_vec(n))
    z = list(zero_vec(m))
    tau = ZERO
    if idx < n:
        v[idx] = Fraction(1)
    elif idx < n + m:
        z[idx - n] = Fraction(1)
    else:
        tau = Fraction(1)
    return AlgebraElement(v=tuple(v), z=tuple(z), tau=tau)


def _add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(
        v=tuple(a + b for a, b in zip(x.v, y.v)),
        z=tuple(a + b for a, b in zip(x.z, y.z)),
        tau=x.tau + y.tau,
    )


def verify_lie_axioms(sig: SpaceSignature) -> tuple[bool, list[str]]:
    """Exact antisymmetry, centrality of z, and Jacobi on all basis triples."""
    violations: list[str] = []
    basis = [basis_element(sig, k) for k in range(sig.dim)]
    for i in range(sig.n):
        if any(c != 0 for c in bracket_vv(sig, basis[i].v, basis[i].v)):
            violations.append(f"[{sig.labels[i]},{sig.labels[i]}] != 0")
        for j in range(i + 1, sig.n):
            lhs = bracket_vv(sig, basis[i].v, basis[j].v)
            rhs = bracket_vv(sig, basis[j].v, basis[i].v)
            if any(a + b != 0 for a, b in zip(lhs, rhs)):
                violations.append(f"[{sig.labels[i]},{sig.labels[j]}] not antisymmetric")
    for i in range(sig.n + sig.m):
        for a in range(sig.n, sig.n + sig.m):
            br = bracket_solvable(sig, basis[i], basis[a])
            if not br.is_zero():
                violations.append(f"[{sig.labels[i]},{sig.labels[a]}] != 0 (z not central in n)")
    for i in range(sig.dim):
        for j in range(i + 1, sig.dim):
            for k in range(j + 1, sig.dim):
                x, y, z = basis[i], basis[j], basis[k]
                s = _add(
                    bracket_solvable(sig, bracket_solvable(sig, x, y), z),
                    _add(
                        bracket_solvable(sig, bracket_solvable(sig, y, z), x),
                        bracket_solvable(sig, bracket_solvable(sig, z, x), y),
                    ),
                )
                if not s.is_zero():
                    violations.append(
                        f"Jacobi fails on ({sig.labels[i]},{sig.labels[j]},{sig.labels[k]})"
                    )
    return not violations, violations


def bracket_norm_identity_defect(sig: SpaceSignature, v) -> Fraction:
    """sum_i |[e_i, v]|^2 - m |v|^2; identically zero for H-type data."""
    v = vec(v)
    total = ZERO
    for i in range(sig.n):
        ei = zero_vec(sig.n)[:i] + (Fraction(1),) + zero_vec(sig.n)[i + 1 :]
        br = bracket_vv(sig, ei, v)
        total += dot(br, br)
    return total - sig.m * dot(v, v)


def signature_to_json_dict(sig: SpaceSignature) -> dict:
    from .clifford import module_to_json_dict

    return {"schema": "drlab.space/1", "module": module_to_json_dict(sig.module)}
