"""Batch front end.

Subcommands:

    drlab space build        construct a Clifford module and write its JSON
    drlab verify             run both identity checks on one family member
    drlab sweep              randomized completeness probe, hits as CSV
    drlab curvature table    closed form / (a,b)-route / numeric h per grid row
    drlab geodesic check     distance-law error per integrated ray
    drlab prop64 scan        orthogonal-split dichotomy over sample splittings

Exit codes: 0 success (and, for verify, expectation met), 1 verify
expectation mismatch, 2 invalid input.  All outputs embed the schema version
and the seed; files are written to a temp name and renamed, so failures never
leave partial files.  DRLAB_SEED in the environment overrides --seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import geometry
from .clifford import invariant_splitting, irreducible_dimension, module_to_json_dict
from .htype import SpaceSignature, build_space
from .model import GeodesicIntegrator
from .poly import poly_names
from .rationals import frac, orthogonal_complement_basis, orthogonalize
from .verify import (
    FamilySpec,
    chk_real_tube,
    distance_like,
    family_polynomial,
    general64_from_indices,
    generalized_64,
    horosphere,
    prop64_check,
    run_sweep,
    spherelike,
    transnormal_residual,
    tube,
    verify_candidate,
)

SCHEMA_PREFIX = "drlab"


@dataclass
class RunConfig:
    m: int
    copies: int
    seed: int
    out: str | None = None
    extras: dict = field(default_factory=dict)


def _fail(msg: str) -> "NoReturn":  # noqa: F821 - py3.10 compat in comments
    print(f"error: {msg}", file=sys.stderr)
    raise SystemExit(2)


def _seed_from(args) -> int:
    env = os.environ.get("DRLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            _fail(f"DRLAB_SEED must be an integer, got {env!r}")
    return args.seed


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".drlab-tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(path: str | None, text: str) -> None:
    if path:
        _atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _csv_text(kind: str, seed: int, header: list[str], rows: list[list]) -> str:
    def fmt(x) -> str:
        if isinstance(x, float):
            return f"{x:.17g}"
        return str(x)

    lines = [f"# schema={SCHEMA_PREFIX}.{kind}/1 seed={seed}"]
    lines.append(",".join(header))
    lines.extend(",".join(fmt(x) for x in row) for row in rows)
    return "\n".join(lines) + "\n"


def _parse_fraction(text: str, what: str) -> Fraction:
    try:
        return frac(text)
    except (ValueError, ZeroDivisionError):
        _fail(f"{what} must be a rational like '3/4', got {text!r}")


def _parse_vector(text: str | None, length: int, what: str):
    if text is None:
        return (Fraction(0),) * length
    parts = [p for p in text.split(",") if p != ""]
    if len(parts) != length:
        _fail(f"{what} needs {length} comma-separated entries, got {len(parts)}")
    return tuple(_parse_fraction(p, what) for p in parts)


def _parse_indices(text: str | None, n: int, what: str) -> tuple[int, ...]:
    if text is None or text == "":
        return ()
    try:
        idx = tuple(int(p) for p in text.split(","))
    except ValueError:
        _fail(f"{what} must be comma-separated integers")
    if any(not 0 <= i < n for i in idx) or len(set(idx)) != len(idx):
        _fail(f"{what} must be distinct indices in 0..{n - 1}")
    return idx


def _space(args) -> SpaceSignature:
    if args.m < 0 or args.copies < 1:
        _fail("need m >= 0 and copies >= 1")
    return build_space(args.m, args.copies)


# -- subcommands ----------------------------------------------------------------


def cmd_space_build(args) -> int:
    sig = _space(args)
    doc = {"schema": f"{SCHEMA_PREFIX}.module/1", "seed": _seed_from(args)}
    doc.update(module_to_json_dict(sig.module))
    _emit(args.out, json.dumps(doc, indent=2) + "\n")
    print(f"n={sig.n} d(m)={irreducible_dimension(args.m)}")
    return 0


def _family_from_args(sig: SpaceSignature, args) -> FamilySpec:
    c1 = _parse_fraction(args.c1, "--c1")
    c2 = _parse_fraction(args.c2, "--c2")
    name = args.family
    if name == "i":
        return horosphere(c1, c2)
    if name == "ii":
        idx = _parse_indices(args.w_indices, sig.n, "--w-indices")
        if not idx:
            _fail("family ii needs --w-indices")
        basis = [
            tuple(Fraction(1 if j == i else 0) for j in range(sig.n)) for i in idx
        ]
        w0 = _parse_vector(args.w0, sig.n, "--w0")
        try:
            return tube(basis, w0, c1, c2)
        except ValueError as e:
            _fail(str(e))
    if name == "iii":
        if args.plus_copies is None:
            _fail("family iii needs --plus-copies")
        try:
            plus, minus = invariant_splitting(sig.module, args.plus_copies)
        except ValueError as e:
            _fail(str(e))
        lam = _parse_fraction(args.lam, "--lambda")
        v0 = _parse_vector(args.v0, sig.n, "--v0")
        z0 = _parse_vector(args.z0, sig.m, "--z0")
        return spherelike(sig, lam, plus, minus, v0=v0, z0=z0, c1=c1, c2=c2)
    if name == "distance":
        t0 = _parse_fraction(args.t0, "--t0")
        v0 = _parse_vector(args.v0, sig.n, "--v0")
        z0 = _parse_vector(args.z0, sig.m, "--z0")
        return distance_like(sig, v0=v0, z0=z0, t0=t0)
    if name == "chk":
        return chk_real_tube(sig)
    if name == "general64":
        idx = _parse_indices(args.v1_indices, sig.n, "--v1-indices")
        return general64_from_indices(sig, idx)
    _fail(f"unknown family {name!r}")


def cmd_verify(args) -> int:
    sig = _space(args)
    spec = _family_from_args(sig, args)
    try:
        GF = family_polynomial(sig, spec)
    except ValueError as e:
        _fail(str(e))
    report = verify_candidate(sig, GF)
    doc = report.to_json_dict()
    doc["seed"] = _seed_from(args)
    doc["family"] = spec.describe()
    doc["space"]["copies"] = args.copies
    _emit(args.out, json.dumps(doc, indent=2) + "\n")
    if args.expect is None:
        return 0
    passed = report.isoparametric
    expected = args.expect == "pass"
    if passed == expected:
        print(f"verdicts match expectation --expect {args.expect}")
        return 0
    print(
        f"expectation mismatch: transnormal={report.transnormal.holds} "
        f"laplace={report.laplace.holds}, expected {args.expect}",
        file=sys.stderr,
    )
    return 1


def cmd_sweep(args) -> int:
    sig = _space(args)
    if args.candidates < 0:
        _fail("--candidates must be >= 0")
    seed = _seed_from(args)
    result = run_sweep(sig, args.candidates, seed, workers=args.workers)
    rows = [[h.index, h.matched or "UNEXPLAINED", f'"{h.text}"'] for h in result.hits]
    text = _csv_text("sweep", seed, ["index", "matched_family", "numerator"], rows)
    text = (
        text
        + f"# candidates={result.candidates} survivors={result.survivors}"
        + f" hits={len(result.hits)} unexplained={len(result.unexplained)}\n"
    )
    _emit(args.out, text)
    return 0


def cmd_curvature_table(args) -> int:
    sig = _space(args)
    seed = _seed_from(args)
    lams = [
        _parse_fraction(p, "--lambdas") for p in args.lambdas.split(",") if p
    ]
    radii = [float(p) for p in args.radii.split(",") if p]
    if any(lam <= 0 for lam in lams):
        _fail("curvature table needs lambda > 0")
    plus_copies = args.plus_copies if args.plus_copies is not None else args.copies
    try:
        plus, minus = invariant_splitting(sig.module, plus_copies)
    except ValueError as e:
        _fail(str(e))
    rows = []
    for lam in lams:
        spec = spherelike(sig, lam, plus, minus)
        GF = family_polynomial(sig, spec)
        bfit = transnormal_residual(sig, GF)
        oracle = geometry.LevelSetOracle(sig, GF, bfit)
        profile = geometry.profile_from_spec(sig, spec)
        for r in radii:
            if r <= 0:
                _fail("radii must be positive")
            h_closed = geometry.mean_curvature_closed(profile, r)
            h_ab = geometry.mean_curvature_ab_route(profile, r)
            c = profile.level_of_radius(r)
            x = geometry.point_on_level(sig, spec, c)
            h_num = oracle.shape_trace_numeric(x)
            rows.append(
                [
                    sig.m,
                    sig.n,
                    profile.n_plus,
                    profile.n_minus,
                    str(lam),
                    r,
                    h_closed,
                    h_ab,
                    h_num,
                    abs(h_num - h_closed),
                ]
            )
    header = [
        "m",
        "n",
        "n_plus",
        "n_minus",
        "lambda",
        "r",
        "h_closed",
        "h_ab_route",
        "h_numeric",
        "abs_err",
    ]
    _emit(args.out, _csv_text("curvature", seed, header, rows))
    return 0


def cmd_geodesic_check(args) -> int:
    sig = _space(args)
    seed = _seed_from(args)
    if args.rays < 0 or args.bases < 1 or args.length <= 0:
        _fail("need rays >= 0, bases >= 1, length > 0")
    steps = args.steps if args.steps else max(600, int(100 * args.length))
    if steps < 100 * args.length:
        _fail("steps must be at least 100 * length")
    rng = np.random.default_rng(seed)
    integ = GeodesicIntegrator(sig)
    rows = []
    path_rows = []
    names = poly_names(sig.n, sig.m)
    ray_id = 0
    for _ in range(args.bases):
        v0 = tuple(Fraction(int(x), 16) for x in rng.integers(-16, 17, sig.n))
        z0 = tuple(Fraction(int(x), 16) for x in rng.integers(-16, 17, sig.m))
        t0 = Fraction(int(rng.integers(8, 33)), 16)
        GF = family_polynomial(sig, distance_like(sig, v0=v0, z0=z0, t0=t0))
        x0 = np.array([float(x) for x in v0 + z0 + (t0,)])
        U = rng.standard_normal((args.rays, sig.dim))
        s, X, err = integ.flow_batch(
            np.repeat(x0[None, :], args.rays, axis=0), U, args.length, steps
        )
        target = 4.0 * float(t0) * np.cosh(s / 2.0) ** 2
        for r in range(args.rays):
            vals = GF.evaluate_batch(X[:, r, :])
            max_err = float(np.max(np.abs(vals - target)))
            rows.append([ray_id, str(t0), max_err, float(err[:, r].max())])
            if args.dump_path is not None and ray_id == args.dump_path:
                for j in range(len(s)):
                    path_rows.append(
                        [float(s[j])]
                        + [float(c) for c in X[j, r, :]]
                        + [float(err[j, r])]
                    )
            ray_id += 1
    header = ["ray", "t0", "max_distance_law_error", "max_speed_error"]
    text = _csv_text("geodesic", seed, header, rows)
    _emit(args.out, text)
    if args.dump_path is not None:
        path_header = ["s"] + names + ["speed_error"]
        _emit(
            args.path_out or "geodesic_path.csv",
            _csv_text("geodesic-path", seed, path_header, path_rows),
        )
    return 0


def cmd_prop64_scan(args) -> int:
    sig = _space(args)
    if sig.n < 2:
        _fail("split scan needs n >= 2")
    seed = _seed_from(args)
    rng = np.random.default_rng(seed)
    cases = []
    if sig.n % 2 == 0:
        cases.append(("alternating_split", list(range(0, sig.n, 2))))
    cases.append(("leading_block", list(range(sig.n // 2))))
    e = lambda i: tuple(Fraction(1 if j == i else 0) for j in range(sig.n))
    rows = []
    for label, idx in cases:
        spec = general64_from_indices(sig, idx)
        rep = prop64_check(sig, spec.v1_basis, spec.v2_basis)
        rows.append(
            [label, len(idx), rep.bracket_condition, rep.transnormal, rep.laplace]
        )
    for j in range(args.splittings):
        dim1 = int(rng.integers(1, sig.n))
        raw = [
            tuple(Fraction(int(x), 8) for x in rng.integers(-8, 9, sig.n))
            for _ in range(dim1)
        ]
        basis1 = orthogonalize(raw)
        if len(basis1) != dim1:
            basis1 = [e(i) for i in range(dim1)]
        basis2 = orthogonal_complement_basis(basis1, sig.n)
        rep = prop64_check(sig, basis1, basis2)
        rows.append(
            [f"random_{j}", len(basis1), rep.bracket_condition, rep.transnormal, rep.laplace]
        )
    header = ["splitting", "dim_v1", "bracket_condition", "transnormal", "laplace"]
    _emit(args.out, _csv_text("prop64", seed, header, rows))
    return 0


# -- parser ----------------------------------------------------------------------


def _add_space_args(p):
    p.add_argument("--m", type=int, required=True, help="center dimension")
    p.add_argument("--copies", type=int, default=1, help="irreducible summands")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None, help="output path (stdout if omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    space = sub.add_parser("space", help="space construction")
    space_sub = space.add_subparsers(dest="subcommand", required=True)
    p = space_sub.add_parser("build", help="build and serialize a Clifford module")
    _add_space_args(p)
    p.set_defaults(func=cmd_space_build)

    p = sub.add_parser("verify", help="verify one family member")
    _add_space_args(p)
    p.add_argument("--family", required=True, choices=["i", "ii", "iii", "distance", "chk", "general64"])
    p.add_argument("--c1", default="1")
    p.add_argument("--c2", default="0")
    p.add_argument("--lambda", dest="lam", default="0", help="rational, e.g. 1/2")
    p.add_argument("--plus-copies", type=int, default=None)
    p.add_argument("--v0", default=None)
    p.add_argument("--z0", default=None)
    p.add_argument("--t0", default="1")
    p.add_argument("--w-indices", default=None)
    p.add_argument("--w0", default=None)
    p.add_argument("--v1-indices", default=None)
    p.add_argument("--expect", choices=["pass", "fail"], default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="randomized completeness probe")
    _add_space_args(p)
    p.add_argument("--candidates", type=int, default=10000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    curv = sub.add_parser("curvature", help="curvature tables")
    curv_sub = curv.add_subparsers(dest="subcommand", required=True)
    p = curv_sub.add_parser("table", help="h by closed form, (a,b)-route, numeric")
    _add_space_args(p)
    p.add_argument("--lambdas", default="1/4,1")
    p.add_argument("--radii", default="0.25,0.5,1,2")
    p.add_argument("--plus-copies", type=int, default=None)
    p.set_defaults(func=cmd_curvature_table)

    geo = sub.add_parser("geodesic", help="geodesic oracles")
    geo_sub = geo.add_subparsers(dest="subcommand", required=True)
    p = geo_sub.add_parser("check", help="distance-law error per ray")
    _add_space_args(p)
    p.add_argument("--rays", type=int, default=20)
    p.add_argument("--bases", type=int, default=3)
    p.add_argument("--length", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--dump-path", type=int, default=None, help="ray id to dump samples for")
    p.add_argument("--path-out", type=str, default=None)
    p.set_defaults(func=cmd_geodesic_check)

    prop = sub.add_parser("prop64", help="orthogonal split dichotomy")
    prop_sub = prop.add_subparsers(dest="subcommand", required=True)
    p = prop_sub.add_parser("scan", help="scan canonical and random splittings")
    _add_space_args(p)
    p.add_argument("--splittings", type=int, default=3)
    p.set_defaults(func=cmd_prop64_scan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
