"""Randomized completeness probe over bounded quartic numerators.

Candidates are sparse random polynomials G(v, z, t) with total degree <= 4,
degree <= 2 in t, at least one t-free monomial, and coefficients drawn from
{+-1/2, +-1, +-2}.  For each candidate the two identities are first screened
numerically (fit b and a through values of |grad F|^2 and Lap F at a fixed
batch of sample points; an exact instance leaves a relative residual at
machine precision, so the 1e-7 screen never rejects a true one), and the
rare survivors are confirmed with the exact rational residuals.  Every
confirmed hit must then be matched to a classified family by the exact
matcher; an unmatched hit is the probe's failure signal.

Desk scale by design: the bounds above are not exhaustive over anything.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..htype import SpaceSignature
from ..poly import Poly, PolyFraction, poly_names
from .matcher import match_main_theorem_family
from .residuals import verify_candidate

COEFF_CHOICES = (
    Fraction(-2),
    Fraction(-1),
    Fraction(-1, 2),
    Fraction(1, 2),
    Fraction(1),
    Fraction(2),
)

MAX_TOTAL_DEGREE = 4
MAX_T_DEGREE = 2
MAX_TERMS = 4
PREFILTER_POINTS = 8
REL_TOL = 1e-7


@dataclass(frozen=True)
class SweepHit:
    index: int
    text: str
    transnormal: bool
    laplace: bool
    matched: str | None


@dataclass
class SweepResult:
    candidates: int
    survivors: int          # candidates sent to the exact stage
    hits: list[SweepHit] = field(default_factory=list)

    @property
    def unexplained(self) -> list[SweepHit]:
        return [h for h in self.hits if h.matched is None]


def sample_candidate(rng: np.random.Generator, n: int, m: int) -> dict[tuple, Fraction]:
    """One random sparse numerator; the first monomial is forced t-free."""
    d = n + m + 1
    terms: dict[tuple, Fraction] = {}
    n_terms = int(rng.integers(1, MAX_TERMS + 1))
    for j in range(n_terms):
        te = 0 if j == 0 else int(rng.integers(0, MAX_T_DEGREE + 1))
        budget = int(rng.integers(0, MAX_TOTAL_DEGREE - te + 1))
        e = [0] * d
        e[-1] = te
        for _ in range(budget):
            e[int(rng.integers(0, n + m))] += 1
        coeff = COEFF_CHOICES[int(rng.integers(0, len(COEFF_CHOICES)))]
        terms[tuple(e)] = coeff  # duplicate exponents overwrite, never cancel
    return terms


def _sample_points(sig: SpaceSignature, seed: int) -> np.ndarray:
    rng = np.random.default_rng([seed, 987654321])
    P, d = PREFILTER_POINTS, sig.dim
    X = np.empty((P, d))
    mag = rng.uniform(0.35, 1.35, size=(P, d))
    sgn = rng.choice([-1.0, 1.0], size=(P, d))
    X[:, :] = mag * sgn
    X[:, -1] = rng.uniform(0.5, 2.2, size=P)
    return X


class _Screen:
    """Vectorized numeric screen shared by all candidate batches."""

    def __init__(self, sig: SpaceSignature, X: np.ndarray):
        self.sig = sig
        self.X = X
        d = sig.dim
        maxe = MAX_TOTAL_DEGREE + 1
        self.PT = np.stack([X[:, j] ** np.arange(maxe)[:, None] for j in range(d)])
        powers = np.arange(maxe, dtype=float)
        self.QT = np.stack([powers[:, None] / X[:, j] for j in range(d)])
        self.Q2T = np.stack(
            [(powers * (powers - 1))[:, None] / X[:, j] ** 2 for j in range(d)]
        )
        if sig.m:
            # jv[a, i, p] = (J_a v_p)_i
            self.jv = np.einsum("aij,pj->aip", sig.j_stack, X[:, : sig.n])
        else:
            self.jv = np.zeros((0, sig.n, X.shape[0]))

    def passes(self, E: np.ndarray, C: np.ndarray) -> np.ndarray:
        """Boolean mask over the batch: both screens within REL_TOL."""
        sig, X = self.sig, self.X
        n, m, d = sig.n, sig.m, sig.dim
        t = X[:, -1]
        monval = C[:, :, None] * np.ones((1, 1, X.shape[0]))
        for j in range(d):
            monval = monval * self.PT[j][E[:, :, j]]
        G = monval.sum(axis=1)
        dG = [
            (monval * self.QT[j][E[:, :, j]]).sum(axis=1) for j in range(d)
        ]
        d2G = [
            (monval * self.Q2T[j][E[:, :, j]]).sum(axis=1) for j in range(d)
        ]
        F = G / t

        # transnormality screen
        W = np.zeros_like(G)
        for i in range(n):
            di = dG[i]
            if m:
                corr = np.zeros_like(di)
                for a in range(m):
                    corr = corr + (-self.jv[a, i][None, :]) * dG[n + a]
                di = di - 0.5 * corr
            W = W + t * di**2
        for a in range(m):
            W = W + t**2 * dG[n + a] ** 2
        W = W + (t * dG[d - 1] - G) ** 2
        ok_t = self._affine_screen(W / t**2, np.stack([F**2, F], axis=2))

        # Laplace screen
        nhalf = sig.m + sig.n / 2.0
        vnorm = (X[:, :n] ** 2).sum(axis=1)
        lap = np.zeros_like(G)
        for i in range(n):
            lap = lap + t * d2G[i]
        if m:
            dz = np.zeros_like(G)
            for a in range(m):
                dz = dz + d2G[n + a]
            lap = lap + (t**2 + t * vnorm / 4.0) * dz
            mix = np.zeros_like(G)
            for i in range(n):
                for a in range(m):
                    mixed = (
                        monval
                        * self.QT[i][E[:, :, i]]
                        * self.QT[n + a][E[:, :, n + a]]
                    ).sum(axis=1)
                    mix = mix + self.jv[a, i][None, :] * mixed
            lap = lap + t * mix
        lap = lap + t**2 * d2G[d - 1] - 2 * t * dG[d - 1] + 2 * G
        lap = lap - (nhalf - 1) * (t * dG[d - 1] - G)
        ok_l = self._affine_screen(lap / t, np.stack([F], axis=2))
        return ok_t & ok_l

    @staticmethod
    def _affine_screen(y: np.ndarray, design: np.ndarray) -> np.ndarray:
        """Fit y ~ design plus a constant column; relative residual screen."""
        B, P, _ = design.shape
        D = np.concatenate([design, np.ones((B, P, 1))], axis=2)
        ata = np.einsum("bpi,bpj->bij", D, D)
        ata = ata + 1e-13 * np.eye(D.shape[2])[None, :, :]
        aty = np.einsum("bpi,bp->bi", D, y)
        try:
            sol = np.linalg.solve(ata, aty[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            return np.ones(B, dtype=bool)  # keep for the exact stage
        pred = np.einsum("bpi,bi->bp", D, sol)
        res = np.abs(y - pred).max(axis=1)
        scale = 1.0 + np.abs(y).max(axis=1)
        out = res / scale < REL_TOL
        bad = ~np.isfinite(res)
        out[bad] = True
        return out


def _sweep_chunk(
    sig: SpaceSignature, seed: int, chunk_index: int, count: int, base_index: int
) -> tuple[int, list[SweepHit]]:
    rng = np.random.default_rng([seed, chunk_index])
    screen = _Screen(sig, _sample_points(sig, seed))
    d = sig.dim
    names = poly_names(sig.n, sig.m)
    term_lists = [sample_candidate(rng, sig.n, sig.m) for _ in range(count)]
    M = max(len(tl) for tl in term_lists)
    E = np.zeros((count, M, d), dtype=np.int64)
    C = np.zeros((count, M))
    for b, tl in enumerate(term_lists):
        for j, (e, c) in enumerate(tl.items()):
            E[b, j] = e
            C[b, j] = float(c)
    mask = screen.passes(E, C)
    survivors = int(mask.sum())
    hits: list[SweepHit] = []
    for b in np.nonzero(mask)[0]:
        G = Poly(d, term_lists[b])
        report = verify_candidate(sig, PolyFraction(G, 1))
        if not report.isoparametric:
            continue
        match = match_main_theorem_family(sig, G)
        hits.append(
            SweepHit(
                index=base_index + int(b),
                text=G.to_text(names),
                transnormal=True,
                laplace=True,
                matched=match.kind if match else None,
            )
        )
    return survivors, hits


def run_sweep(
    sig: SpaceSignature,
    candidates: int,
    seed: int,
    workers: int = 1,
    chunk_size: int = 4096,
    extra_candidates: tuple[Poly, ...] = (),
) -> SweepResult:
    """Run the probe over `candidates` random numerators (plus any explicit
    extras, which skip the screen and go straight to the exact stage).

    Deterministic for a fixed (seed, candidates): the chunk index seeds each
    chunk's generator, so the worker count does not change the stream.
    """
    tasks = []
    start = 0
    chunk_index = 0
    while start < candidates:
        size = min(chunk_size, candidates - start)
        tasks.append((sig, seed, chunk_index, size, start))
        start += size
        chunk_index += 1
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.starmap(_sweep_chunk, tasks)
    else:
        results = [_sweep_chunk(*t) for t in tasks]
    out = SweepResult(candidates=candidates, survivors=0)
    for survivors, hits in results:
        out.survivors += survivors
        out.hits.extend(hits)
    names = poly_names(sig.n, sig.m)
    for j, G in enumerate(extra_candidates):
        report = verify_candidate(sig, PolyFraction(G, 1))
        out.survivors += 1
        if report.isoparametric:
            match = match_main_theorem_family(sig, G)
            out.hits.append(
                SweepHit(
                    index=-(j + 1),
                    text=G.to_text(names),
                    transnormal=True,
                    laplace=True,
                    matched=match.kind if match else None,
                )
            )
    return out
