"""Real Clifford modules: anticommuting skew-orthogonal generator matrices.

The data of a module is a list of m real n x n matrices J_1..J_m with

    J_a^T = -J_a,   J_a J_b + J_b J_a = -2 delta_ab I,

equivalently |J_z v| = |z| |v| for J_z = sum z^a J_a.  All entries are exact
rationals (in fact 0 or +-1 for the built-in construction), so every relation
is checked as an identity, never up to a tolerance.

The irreducible construction is a fixed recursive tensor recipe:

    m = 1..3   left multiplication by i, j, k on the quaternions,
    m = 4..7   a doubling that pairs quaternion left and right
               multiplications on R^8 (rights commute with lefts),
    m = 8      one more doubling to R^16,
    m > 8      period-8 recursion J -> (A x I, omega x J) with A the m=8
               generators and omega their product (symmetric, omega^2 = I),

which gives the minimal dimensions d(1..8) = 2,4,4,8,8,8,8,16 and
d(m+8) = 16 d(m).  Any valid construction would pass the invariants; fixing
one keeps golden outputs stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .rationals import Mat, frac

IntMat = tuple[tuple[int, ...], ...]

_R: IntMat = ((0, -1), (1, 0))  # rotation by 90 degrees, R^2 = -I
_S: IntMat = ((1, 0), (0, -1))
_T: IntMat = ((0, 1), (1, 0))


def _ident(k: int) -> IntMat:
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def _kron(a: IntMat, b: IntMat) -> IntMat:
    p, q = len(a), len(b)
    return tuple(
        tuple(a[i // q][j // q] * b[i % q][j % q] for j in range(p * q))
        for i in range(p * q)
    )


def _matmul(a: IntMat, b: IntMat) -> IntMat:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


# Quaternion left multiplications by i, j, k on R^4 = H with basis (1, i, j, k),
# and the corresponding right multiplications (which commute with the lefts).
_LI = _kron(_ident(2), _R)
_LJ = _kron(_R, _S)
_LK = _kron(_R, _T)
_RI = _kron(_S, _R)
_RJ = _kron(_R, _ident(2))
_RK = _kron(_T, _R)


@lru_cache(maxsize=None)
def _irreducible(m: int) -> tuple[IntMat, ...]:
    if m == 0:
        return ()
    if m == 1:
        return (_R,)
    if m <= 3:
        return (_LI, _LJ, _LK)[:m]
    if m <= 7:
        gens8 = (
            _kron(_S, _LI),
            _kron(_S, _LJ),
            _kron(_S, _LK),
            _kron(_R, _ident(4)),
            _kron(_T, _RI),
            _kron(_T, _RJ),
            _kron(_T, _RK),
        )
        return gens8[:m]
    if m == 8:
        seven = _irreducible(7)
        return tuple(_kron(_S, a) for a in seven) + (_kron(_R, _ident(8)),)
    # Period-8 step: with A_1..A_8 on R^16 and omega = A_1...A_8 (symmetric,
    # omega^2 = I, anticommutes with each A_j), the maps A_j x I and
    # omega x K_i generate Cl(0, m) on R^(16 d(m-8)).
    eight = _irreducible(8)
    omega = eight[0]
    for a in eight[1:]:
        omega = _matmul(omega, a)
    inner = _irreducible(m - 8)
    d_inner = irreducible_dimension(m - 8)
    out = [_kron(a, _ident(d_inner)) for a in eight]
    out += [_kron(omega, k) for k in inner]
    return tuple(out)


def irreducible_dimension(m: int) -> int:
    """Minimal real module dimension d(m); d(0) = 1, d(m+8) = 16 d(m)."""
    if m < 0:
        raise ValueError("center dimension must be non-negative")
    table = (1, 2, 4, 4, 8, 8, 8, 8)
    d = 1
    while m >= 8:
        d *= 16
        m -= 8
    return d * table[m]


@dataclass(frozen=True)
class CliffordModule:
    """m generators on R^n, built from `copies` diagonal irreducible blocks."""

    m: int
    n: int
    copies: int
    generators: tuple[Mat, ...]
    block_boundaries: tuple[tuple[int, int], ...]

    def generator_entry(self, a: int, i: int, j: int) -> Fraction:
        return self.generators[a][i][j]


def _block_diag(block: IntMat, copies: int) -> Mat:
    d = len(block)
    n = d * copies
    rows = []
    for i in range(n):
        bi, ri = divmod(i, d)
        row = [Fraction(0)] * n
        for rj in range(d):
            v = block[ri][rj]
            if v:
                row[bi * d + rj] = Fraction(v)
        rows.append(tuple(row))
    return tuple(rows)


def build_clifford_module(m: int, copies: int) -> CliffordModule:
    """Build the canonical module with `copies` irreducible summands.

    For m = 0 there are no generators and `copies` is the module dimension
    directly (each summand is the 1-dimensional trivial module).
    """
    if m < 0:
        raise ValueError("center dimension m must be >= 0")
    if copies < 1:
        raise ValueError("copies must be >= 1")
    d = irreducible_dimension(m)
    n = d * copies
    gens = tuple(_block_diag(g, copies) for g in _irreducible(m))
    blocks = tuple((i * d, (i + 1) * d) for i in range(copies))
    return CliffordModule(m=m, n=n, copies=copies, generators=gens, block_boundaries=blocks)


def _integer_matrix(g: Mat):
    """Exact int64 copy when all entries are integers (true for the built-in
    construction); None forces the slow Fraction path."""
    if all(e.denominator == 1 for row in g for e in row):
        import numpy as np

        return np.array([[int(e) for e in row] for row in g], dtype=np.int64)
    return None


def verify_clifford_relations(mod: CliffordModule) -> tuple[bool, list[str]]:
    """Exact check of skew-symmetry and the anticommutation relations.

    Returns (ok, violations); each violation names the offending generator or
    pair.  Orthogonality J^T J = I follows from J^T = -J and J^2 = -I, so it
    is not re-checked separately.  Integer matrices go through exact int64
    arithmetic; anything else falls back to Fractions.
    """
    violations: list[str] = []
    n = mod.n
    if mod.m and any(len(g) != n or any(len(r) != n for r in g) for g in mod.generators):
        violations.append("generator of wrong shape")
        return False, violations
    if n != mod.copies * irreducible_dimension(mod.m):
        violations.append(f"n={n} != copies*d(m)={mod.copies * irreducible_dimension(mod.m)}")
    ints = [_integer_matrix(g) for g in mod.generators]
    for a, (J, Ji) in enumerate(zip(mod.generators, ints), start=1):
        if Ji is not None:
            skew = (Ji.T == -Ji).all()
        else:
            skew = all(J[i][j] == -J[j][i] for i in range(n) for j in range(i, n))
        if not skew:
            violations.append(f"J{a} not skew-symmetric")
    for a in range(mod.m):
        for b in range(a, mod.m):
            Ja, Jb = ints[a], ints[b]
            if Ja is not None and Jb is not None:
                anti = Ja @ Jb + Jb @ Ja
                want = -2 * _np_eye(n) if a == b else 0
                ok = (anti == want).all()
            else:
                ok = _anticommutator_ok(mod.generators[a], mod.generators[b], a == b, n)
            if not ok:
                if a == b:
                    violations.append(f"J{a + 1}J{a + 1} != -I")
                else:
                    violations.append(f"J{a + 1}J{b + 1} + J{b + 1}J{a + 1} != 0")
    return not violations, violations


def _np_eye(n: int):
    import numpy as np

    return np.eye(n, dtype=np.int64)


def _anticommutator_ok(Ja: Mat, Jb: Mat, diagonal: bool, n: int) -> bool:
    target = Fraction(-2) if diagonal else Fraction(0)
    for i in range(n):
        for j in range(n):
            s = sum(Ja[i][k] * Jb[k][j] + Jb[i][k] * Ja[k][j] for k in range(n))
            want = target if i == j else Fraction(0)
            if s != want:
                return False
    return True


def invariant_splitting(mod: CliffordModule, plus_copies: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split the basis indices into the first `plus_copies` irreducible blocks
    and the rest; both sides are exactly invariant under every generator."""
    if not 0 <= plus_copies <= mod.copies:
        raise ValueError(f"plus_copies={plus_copies} out of range 0..{mod.copies}")
    cut = mod.block_boundaries[plus_copies - 1][1] if plus_copies > 0 else 0
    plus = tuple(range(cut))
    minus = tuple(range(cut, mod.n))
    for idx in (plus, minus):
        if not indices_invariant(mod, idx):
            raise AssertionError("block splitting not generator-invariant")
    return plus, minus


def indices_invariant(mod: CliffordModule, indices: tuple[int, ...]) -> bool:
    """True iff span(e_i : i in indices) is mapped into itself by every J_a."""
    inside = set(indices)
    for J in mod.generators:
        for i in indices:
            for r in range(mod.n):
                if J[r][i] != 0 and r not in inside:
                    return False
    return True


def module_to_json_dict(mod: CliffordModule) -> dict:
    """JSON form: each generator is a flat row-major list of [num, den] pairs."""
    return {
        "m": mod.m,
        "n": mod.n,
        "copies": mod.copies,
        "generators": [
            [[e.numerator, e.denominator] for row in g for e in row] for g in mod.generators
        ],
    }


def module_from_json_dict(doc: dict) -> CliffordModule:
    m, n, copies = int(doc["m"]), int(doc["n"]), int(doc["copies"])
    gens = []
    for flat in doc["generators"]:
        if len(flat) != n * n:
            raise ValueError("generator entry count != n*n")
        entries = [frac(Fraction(num, den)) for num, den in flat]
        gens.append(tuple(tuple(entries[i * n : (i + 1) * n]) for i in range(n)))
    d = n // copies if copies else n
    blocks = tuple((i * d, (i + 1) * d) for i in range(copies))
    return CliffordModule(m=m, n=n, copies=copies, generators=tuple(gens), block_boundaries=blocks)
