"""Command-line front end.

Exit codes: 0 success, 1 runtime error, 2 usage error, 3 a numerical
classification contradicts the predicted characteristic set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import catalog, fractal, regions, render, verification

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EXIT_CONTRADICTION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CHARSET_SEED")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"CHARSET_SEED must be an integer, got {env!r}") from exc
    return verification.DEFAULT_SEED


def _levels(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in text.split(",")]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",")]


def _number(text: str) -> float:
    return float(regions.as_rational(text)) if "/" in text else float(text)


def _alpha(text: str) -> float:
    if text in ("middle-thirds", "log2/log3"):
        return fractal.MIDDLE_THIRDS
    return _number(text)


# ---------------------------------------------------------------------------
# profile


def _spec_from_args(args) -> catalog.OperatorSpec:
    op = args.op
    need = {"multiplication": ["r"], "averaging": ["alpha"], "riemann-liouville": ["alpha"],
            "riesz": ["lam", "alpha"], "rademacher-horizontal": ["q0"],
            "rademacher-vertical": ["p0"]}
    if op is None and not args.spec:
        raise UsageError("give --op or --spec")
    if op == "sum" or args.spec:
        if not args.spec:
            raise UsageError("--op sum needs --spec FILE")
        data = _read_json(args.spec)
        if isinstance(data, list):
            data = {"kind": "sum", "terms": data}
        spec = catalog.spec_from_json(data)
    elif op == "inclusion":
        spec = catalog.Inclusion()
    else:
        for name in need.get(op, []):
            if getattr(args, name) is None:
                flag = "--lambda" if name == "lam" else f"--{name}"
                raise UsageError(f"--op {op} needs {flag}")
        spec = catalog.spec_from_json({
            "kind": op, "r": args.r, "alpha": args.alpha, "lambda": args.lam,
            "q0": args.q0, "p0": args.p0})
    return catalog.Adjoint(spec) if args.adjoint else spec


def cmd_profile(args) -> int:
    try:
        spec = _spec_from_args(args)
        prof = catalog.profile(spec)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"invalid operator spec: {exc}") from exc
    data = {"spec": spec.to_json(), "profile": regions.profile_to_json(prof)}
    _emit(_dump(data), args.out)
    if args.svg:
        Path(args.svg).write_text(render.profile_svg(prof, spec.kind))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _write_report(report: verification.Report, args) -> None:
    _emit(report.to_json(), args.out)


def cmd_verify_riesz(args) -> int:
    point = regions.Q2Point.from_exponents(args.p, args.q)
    seed = _seed(args)
    rep = verification.boundedness_report(args.lam, args.alpha, [point], _levels(args.levels),
                                          seed=seed, jobs=args.jobs)
    _write_report(rep, args)
    growth = rep.results[0]
    if args.csv:
        Path(args.csv).write_text(verification.GrowthReport(**growth).csv())
    expected = verification.predicted_class(args.lam, args.alpha, point)
    got = growth["classification"]
    if expected and got != "inconclusive" and got != expected:
        print(f"classification {got} contradicts predicted {expected}", file=sys.stderr)
        return EXIT_CONTRADICTION
    return EXIT_OK


def cmd_verify_witness(args) -> int:
    rep = verification.witness_report(args.lam, args.alpha, args.invp, _ints(args.k), seed=_seed(args))
    _write_report(rep, args)
    return EXIT_OK if rep.classification == "non-compact" else EXIT_CONTRADICTION


def cmd_verify_weak(args) -> int:
    rep = verification.weak_type_report(args.lam, args.alpha, args.x, _levels(args.levels),
                                        seed=_seed(args))
    _write_report(rep, args)
    return EXIT_OK if rep.classification == "stable" else EXIT_CONTRADICTION


def cmd_verify_duality(args) -> int:
    rep = verification.duality_report(args.instances, seed=_seed(args))
    _write_report(rep, args)
    return EXIT_OK if rep.classification == "consistent" else EXIT_CONTRADICTION


def cmd_verify_subspace(args) -> int:
    rep = verification.subspace_report(args.case, args.p, args.m, args.q, args.s, args.trials,
                                       seed=_seed(args))
    _write_report(rep, args)
    return EXIT_OK if rep.classification == "consistent" else EXIT_CONTRADICTION


def _fractal_data(alpha, level, samples, seed, check):
    space = fractal.cantor_build(alpha, level)
    data = {"alpha": alpha, "level": level, "atoms_count": space.size,
            "cell_diameter": space.cell_diameter}
    if check:
        est = fractal.ahlfors_constants(space, samples, seed)
        data.update(c_hat=est.c_hat, C_hat=est.C_hat, ratio=est.ratio, samples=samples)
    return data


def cmd_verify_fractal(args) -> int:
    seed = _seed(args)
    data = _fractal_data(args.alpha, args.level, args.samples, seed, True)
    spec = fractal.CantorSpec(args.alpha, args.level)
    sums = {}
    trends = {}
    for label, s in (("at", args.alpha), ("above", args.alpha + 0.1), ("below", args.alpha - 0.1)):
        vals = [fractal.hausdorff_sum(spec, s, m).value for m in range(1, args.level + 1)]
        sums[label] = vals
        d = np.diff(vals)
        trends[label] = ("constant" if np.all(d == 0) else "decreasing" if np.all(d < 0)
                         else "increasing" if np.all(d > 0) else "mixed")
    data["hausdorff_sums"] = sums
    ok = (trends == {"at": "constant", "above": "decreasing", "below": "increasing"}
          and data["c_hat"] > 0 and data["ratio"] < 100)
    rep = verification.Report("fractal", {"alpha": args.alpha, "level": args.level,
                                          "samples": args.samples}, seed, [data],
                              "regular" if ok else "irregular")
    _write_report(rep, args)
    return EXIT_OK if ok else EXIT_CONTRADICTION


def cmd_fractal(args) -> int:
    data = _fractal_data(args.alpha, args.level, args.samples, _seed(args), args.check_ahlfors)
    _emit(_dump(data), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# region


def _region_input(path):
    try:
        return regions.region_from_json(_read_json(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed region in {path}: {exc}") from exc


def cmd_region_dual(args) -> int:
    r = regions.dual_region(_region_input(args.inp))
    _emit(_dump(regions.region_to_json(r)), args.out)
    return EXIT_OK


def cmd_region_intersect(args) -> int:
    r = regions.intersect(_region_input(args.a), _region_input(args.b))
    _emit(_dump(regions.region_to_json(r)), args.out)
    return EXIT_OK


def cmd_region_validate(args) -> int:
    data = _read_json(args.profile)
    if isinstance(data, dict) and "profile" in data:
        data = data["profile"]
    try:
        prof = regions.profile_from_json(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed profile in {args.profile}: {exc}") from exc
    violations = regions.validate_profile(prof)
    for v in violations:
        print(v)
    return EXIT_OK if not violations else EXIT_CONTRADICTION


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charset",
                                 description="Characteristic sets of operators between Lp spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="exact L, K, S, V sets of a catalog operator")
    p.add_argument("--op",
                   choices=["inclusion", "multiplication", "averaging", "riemann-liouville",
                            "riesz", "rademacher-horizontal", "rademacher-vertical", "sum"])
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--alpha")
    p.add_argument("--r")
    p.add_argument("--q0")
    p.add_argument("--p0")
    p.add_argument("--spec", help="operator JSON (or a list of summands)")
    p.add_argument("--adjoint", action="store_true", help="use the adjoint operator")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_profile)

    v = sub.add_parser("verify", help="numerical experiments")
    vs = v.add_subparsers(dest="experiment", required=True)

    def common(q, riesz=True):
        if riesz:
            q.add_argument("--lambda", dest="lam", type=_number, required=True)
            q.add_argument("--alpha", type=_number, required=True)
        q.add_argument("--seed", type=int)
        q.add_argument("--out")
        return q

    q = common(vs.add_parser("riesz-bounded"))
    q.add_argument("--p", type=_number, required=True)
    q.add_argument("--q", type=_number, required=True)
    q.add_argument("--levels", default="4..9")
    q.add_argument("--csv")
    q.add_argument("--jobs", type=int, default=1)
    q.set_defaults(func=cmd_verify_riesz)

    q = common(vs.add_parser("witness"))
    q.add_argument("--invp", type=_number, required=True)
    q.add_argument("--k", default="4,8,16,32")
    q.set_defaults(func=cmd_verify_witness)

    q = common(vs.add_parser("weak-type"))
    q.add_argument("--x", type=_number, required=True)
    q.add_argument("--levels", default="6,8")
    q.set_defaults(func=cmd_verify_weak)

    q = common(vs.add_parser("duality"), riesz=False)
    q.add_argument("--instances", type=int, default=20)
    q.set_defaults(func=cmd_verify_duality)

    q = common(vs.add_parser("subspace"), riesz=False)
    q.add_argument("--case", required=True, choices=["p-gt-2", "q-le-p-le-s"])
    q.add_argument("--p", type=_number, required=True)
    q.add_argument("--q", type=_number)
    q.add_argument("--s", type=_number)
    q.add_argument("--m", type=int, default=16)
    q.add_argument("--trials", type=int, default=200)
    q.set_defaults(func=cmd_verify_subspace)

    q = common(vs.add_parser("fractal"), riesz=False)
    q.add_argument("--alpha", type=_alpha, default=fractal.MIDDLE_THIRDS)
    q.add_argument("--level", type=int, default=10)
    q.add_argument("--samples", type=int, default=10_000)
    q.set_defaults(func=cmd_verify_fractal)

    r = sub.add_parser("region", help="region calculus on JSON files")
    rs = r.add_subparsers(dest="action", required=True)
    q = rs.add_parser("dual")
    q.add_argument("--in", dest="inp", required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_region_dual)
    q = rs.add_parser("intersect")
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_region_intersect)
    q = rs.add_parser("validate")
    q.add_argument("--profile", required=True)
    q.set_defaults(func=cmd_region_validate)

    f = sub.add_parser("fractal", help="Cantor set summary and regularity constants")
    f.add_argument("--alpha", type=_alpha, required=True)
    f.add_argument("--level", type=int, required=True)
    f.add_argument("--check-ahlfors", action="store_true")
    f.add_argument("--samples", type=int, default=10_000)
    f.add_argument("--seed", type=int)
    f.add_argument("--out")
    f.set_defaults(func=cmd_fractal)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"charset: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"charset: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
