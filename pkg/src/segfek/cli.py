"""Command-line front end: support families, Lebesgue tables, the endpoint
table for the normalized concatenated problem, arc-radius sweeps, test-function
interpolation, and the invariant verification suites.

Exit codes: 0 success, 1 failed verification, 2 invalid configuration,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import families
from .fekete import (
    FeketeError,
    det_rho_sweep,
    fekete_concat_normalized,
    lgl_nodes,
    nodal_logdet_chebu,
)
from .arcmap import fejer_functional
from .interpolation import get_test_function, interpolate
from .lebesgue import (
    _grid_scale,
    fejer_sum_sq,
    growth_profile,
    lebesgue_constant,
    lower_bound_floor,
    rows_to_csv,
)
from .polybasis import BasisKind
from .supports import ArcFamily, SupportSet, arc_parameters, concat_from_nodes
from .vandermonde import Mode, ProductForm, build, lagrange_basis, product_formula_det, sign_log_det

_BASIS = {"monomial": BasisKind.MONOMIAL, "chebu": BasisKind.CHEBYSHEV_U, "legendre": BasisKind.LEGENDRE}
_MODE = {"nodal": Mode.NODAL, "segmental": Mode.SEGMENTAL, "normalized": Mode.NORMALIZED}

_SQRT2 = math.sqrt(2.0)
TABLE1_ANALYTIC = {
    1: (-1.0, 1.0),
    2: (-1.0, None, 1.0),  # middle breakpoint is free
    3: (-1.0, -1.0, 1.0, 1.0),
    4: (-1.0, -1.0, 0.0, 1.0, 1.0),
    5: (-1.0, -1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0, 1.0),
    6: (-1.0, -1.0, -(1.0 + 2.0 * _SQRT2) / 7.0, 0.0, (1.0 + 2.0 * _SQRT2) / 7.0, 1.0, 1.0),
}


def parse_range(text: str):
    """`N` or inclusive `A:B:S`, never exceeding B."""
    parts = text.split(":")
    if len(parts) == 1:
        return [int(parts[0])]
    if len(parts) == 3:
        a, b, s = (int(p) for p in parts)
        if s <= 0:
            raise ValueError("range step must be positive")
        if b < a:
            raise ValueError("range end must be >= start")
        return list(range(a, b + 1, s))
    raise ValueError(f"bad range {text!r}: use N or A:B:S")


def _json_default(obj):
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj)}")


def _dumps(payload) -> str:
    return json.dumps(payload, indent=2, default=_json_default) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # the same flags are accepted before and after the subcommand; the
    # subparser copies default to SUPPRESS so they never clobber earlier values
    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--basis", choices=sorted(_BASIS), default=dflt("chebu"))
    parser.add_argument("--mode", choices=sorted(_MODE), default=dflt("normalized"))
    parser.add_argument("--seed", type=int, default=dflt(0))
    parser.add_argument("--out", default=dflt(None), help="output path (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], default=dflt(None))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fekete", description=__doc__)
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_command(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        _add_global_flags(p, suppress=True)
        return p

    p = add_command("nodes", help="node families (lgl, uniform-nodes)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--family", choices=families.NODE_FAMILIES, default="lgl")

    p = add_command("segments", help="segment families")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--family", choices=families.SEGMENT_FAMILIES, default="c1-fekete")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5, help="rho = lambda*pi/r")
    p.add_argument("--starts", type=int, default=16)

    p = add_command("lebesgue", help="Lebesgue constants over a degree range")
    p.add_argument("--r", required=True, help="degree or range A:B:S")
    p.add_argument("--family", choices=families.ALL_FAMILIES, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--starts", type=int, default=16)

    add_command("table1", help="normalized concatenated optima for r = 1..6 vs analytic")

    p = add_command("rho-sweep", help="determinant vs arc-radius")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--points", type=int, default=20)

    p = add_command("interp", help="interpolate a registry function")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--family", choices=families.ALL_FAMILIES, required=True)
    p.add_argument("--function", required=True, help="runge | abs | step | exp | poly:<coeffs>")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--starts", type=int, default=16)
    p.add_argument("--grid-points", type=int, default=1001)

    p = add_command("verify", help="run invariant suites")
    p.add_argument("suite", choices=["all", "det", "lagrange", "fejer", "rho", "lebesgue"])
    return parser


def _supports_csv(sset: SupportSet) -> str:
    lines = ["alpha,beta"]
    lines += [f"{s.alpha:.17g},{s.beta:.17g}" for s in sset.supports]
    return "\n".join(lines) + "\n"


def cmd_nodes(args) -> int:
    xs = families.family_nodes(args.family, args.r)
    if args.format == "csv":
        _write("x\n" + "\n".join(f"{x:.17g}" for x in xs) + "\n", args.out)
        return 0
    _, logdet = product_formula_det(xs, ProductForm.NODAL_PRODUCT)
    payload = {
        "r": args.r,
        "mode": "nodal",
        "endpoints": [float(x) for x in xs],
        "log_abs_det": logdet,
        "diagnostics": {"method": "closed-form", "family": args.family},
    }
    _write(_dumps(payload), args.out)
    return 0


def cmd_segments(args) -> int:
    result = families.family_result(args.family, args.r, lam=args.lam, seed=args.seed, starts=args.starts)
    if result is not None:
        sset = result.set
        payload = result.to_json_dict()
    else:
        sset = families.support_family(args.family, args.r)
        _, logdet = sign_log_det(build(_BASIS[args.basis], sset, Mode.NORMALIZED))
        payload = {
            "r": args.r,
            "mode": args.family,
            "endpoints": [[s.alpha, s.beta] for s in sset.supports],
            "log_abs_det": logdet,
            "diagnostics": {"method": "reference-family"},
        }
    if args.format == "csv":
        _write(_supports_csv(sset), args.out)
        return 0
    payload["supports"] = [[s.alpha, s.beta] for s in sset.supports]
    payload["class"] = sset.class_tag
    _write(_dumps(payload), args.out)
    return 0


def cmd_lebesgue(args) -> int:
    r_values = parse_range(args.r)
    if not r_values:
        raise ValueError("empty degree range")
    family = lambda r: families.support_family(
        args.family, r, lam=args.lam, seed=args.seed, starts=args.starts
    )
    rows = growth_profile(family, r_values, _BASIS[args.basis], _MODE[args.mode])
    failed = [row for row in rows if row.error]
    if args.format == "json":
        payload = [
            {"r": row.r, "lebesgue": row.lebesgue, "argmax_x": row.argmax_x,
             "grid_size": row.grid_size, **({"error": row.error} if row.error else {})}
            for row in rows
        ]
        _write(_dumps(payload), args.out)
    else:
        _write(rows_to_csv(rows), args.out)
    if failed:
        print(f"{len(failed)} row(s) failed: {failed[0].error}", file=sys.stderr)
        return 3
    return 0


def cmd_table1(args) -> int:
    rows = []
    worst = 0.0
    for r in range(1, 7):
        result = fekete_concat_normalized(r, starts=8, seed=args.seed)
        computed = np.array(result.endpoints)
        analytic = TABLE1_ANALYTIC[r]
        devs = [abs(c - a) for c, a in zip(computed, analytic) if a is not None]
        dev = max(devs)
        worst = max(worst, dev)
        rows.append({
            "r": r,
            "computed": [float(c) for c in computed],
            "analytic": [a for a in analytic],
            "max_deviation": dev,
            "non_unique": result.non_unique,
        })
    if args.format == "json":
        _write(_dumps({"rows": rows, "max_deviation": worst, "passed": worst <= 1e-6}), args.out)
    else:
        lines = [f"{'r':>2}  {'max dev':>10}  endpoints (computed | analytic)"]
        for row in rows:
            comp = ", ".join(f"{c:+.8f}" for c in row["computed"])
            ana = ", ".join("free" if a is None else f"{a:+.8f}" for a in row["analytic"])
            note = "  [non-unique]" if row["non_unique"] else ""
            lines.append(f"{row['r']:>2}  {row['max_deviation']:>10.2e}  {comp} | {ana}{note}")
        lines.append(f"max deviation: {worst:.3e} ({'pass' if worst <= 1e-6 else 'FAIL'})")
        _write("\n".join(lines) + "\n", args.out)
    return 0 if worst <= 1e-6 else 3


def cmd_rho_sweep(args) -> int:
    if args.points < 1:
        raise ValueError("need at least one grid point")
    grid = [k * math.pi / (args.r * (args.points + 1)) for k in range(1, args.points + 1)]
    rows = det_rho_sweep(args.r, grid)
    failed = [row for row in rows if row.error]
    if args.format == "json":
        payload = [
            {"rho": row.rho, "log_abs_det": row.log_abs_det,
             **({"error": row.error} if row.error else {})}
            for row in rows
        ]
        _write(_dumps(payload), args.out)
    else:
        lines = ["rho,log_abs_det"]
        lines += [f"{row.rho:.17g},{row.log_abs_det:.17g}" for row in rows]
        _write("\n".join(lines) + "\n", args.out)
    if failed:
        print(f"{len(failed)} row(s) failed: {failed[0].error}", file=sys.stderr)
        return 3
    return 0


def cmd_interp(args) -> int:
    f = get_test_function(args.function)
    sset = families.support_family(args.family, args.r, lam=args.lam, seed=args.seed, starts=args.starts)
    poly = interpolate(sset, _BASIS[args.basis], _MODE[args.mode], f)
    n = args.grid_points * _grid_scale()
    grid = np.linspace(-1.0, 1.0, n)
    fx = np.asarray(f(grid), dtype=float)
    px = poly(grid)
    err = np.abs(fx - px)
    if args.format == "json":
        payload = {
            "r": args.r, "family": args.family, "function": args.function,
            "basis": args.basis, "mode": args.mode,
            "coefficients": [float(c) for c in poly.coeffs],
            "grid_points": int(n), "max_abs_error": float(err.max()),
        }
        _write(_dumps(payload), args.out)
    else:
        lines = ["x,f,interp,abs_error"]
        lines += [
            f"{x:.17g},{fv:.17g},{pv:.17g},{e:.17g}"
            for x, fv, pv, e in zip(grid, fx, px, err)
        ]
        _write("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# verification suites


def _check(name: str, passed: bool, detail: str):
    return {"name": name, "passed": bool(passed), "detail": detail}


def _suite_det(seed: int):
    rng = np.random.default_rng([seed, 1])
    worst = {"nodal": 0.0, "hat": 0.0, "normalized": 0.0}
    for r in range(2, 13):
        for _ in range(20):
            xs = families.random_spaced_breakpoints(rng, r + 1)
            nodes = xs[:-1]
            _, lp = product_formula_det(nodes, ProductForm.NODAL_PRODUCT)
            _, lm = sign_log_det(build(BasisKind.MONOMIAL, SupportSet.from_nodes(nodes), Mode.NODAL))
            worst["nodal"] = max(worst["nodal"], abs(lp - lm))
            sset = concat_from_nodes(xs)
            _, lp = product_formula_det(xs, ProductForm.CONCAT_HAT)
            _, lm = sign_log_det(build(BasisKind.MONOMIAL, sset, Mode.SEGMENTAL))
            worst["hat"] = max(worst["hat"], abs(lp - lm))
            _, lp = product_formula_det(xs, ProductForm.CONCAT_NORMALIZED)
            _, lm = sign_log_det(build(BasisKind.MONOMIAL, sset, Mode.NORMALIZED))
            worst["normalized"] = max(worst["normalized"], abs(lp - lm))
    return [
        _check(f"det-identity-{key}", gap <= 1e-9, f"max log-det gap {gap:.2e} (tol 1e-9)")
        for key, gap in worst.items()
    ]


def _suite_lagrange(seed: int):
    checks = []
    sset = SupportSet.from_nodes(lgl_nodes(20))
    sys_ = build(BasisKind.CHEBYSHEV_U, sset, Mode.NODAL)
    lag = lagrange_basis(sys_)
    gap = float(np.max(np.abs(sys_.matrix @ lag.coeff_matrix.T - np.eye(20))))
    checks.append(_check("duality-nodal-lgl-r20", gap <= 1e-9, f"max |delta - pairing| {gap:.2e}"))
    sset = families.support_family("c1-fekete", 10)
    seg = lagrange_basis(build(BasisKind.CHEBYSHEV_U, sset, Mode.SEGMENTAL))
    nor = lagrange_basis(build(BasisKind.CHEBYSHEV_U, sset, Mode.NORMALIZED))
    rel = float(np.max(np.abs(nor.coeff_matrix - seg.coeff_matrix * sset.lengths[:, None])))
    checks.append(_check("length-scaling-c1-r10", rel <= 1e-9, f"max |l - |s| lhat| {rel:.2e}"))
    grid = np.linspace(-1.0, 1.0, 2001)
    pou = float(np.max(np.abs(nor.evaluate(grid).sum(axis=1) - 1.0)))
    checks.append(_check("partition-of-unity-c1-r10", pou <= 1e-10, f"max |sum l - 1| {pou:.2e}"))
    return checks


def _suite_fejer(seed: int):
    checks = []
    for r in (4, 8, 16):
        lam = 0.5
        rho = lam * math.pi / r
        mids = lgl_nodes(r) * math.cos(rho)
        fam = ArcFamily(rho, tuple(np.arccos(mids[::-1])))
        val = fejer_functional(fam)
        checks.append(
            _check(f"fejer-c2-fekete-r{r}", abs(val - 1.0) <= 1e-6, f"max functional {val:.10f}")
        )
    val = fejer_sum_sq(SupportSet.from_nodes(lgl_nodes(10)))
    checks.append(_check("fejer-nodal-lgl-r10", val <= 1.0 + 1e-9, f"max sum of squares {val:.10f}"))
    val = fejer_sum_sq(SupportSet.from_nodes(np.linspace(-1, 1, 10)))
    checks.append(_check("fejer-nodal-uniform-r10", val > 1.0, f"max sum of squares {val:.6f} (> 1 expected)"))
    return checks


def _suite_rho(seed: int):
    checks = []
    for r in (4, 8):
        grid = [k * math.pi / (r * 21) for k in range(1, 21)]
        rows = det_rho_sweep(r, grid)
        vals = [row.log_abs_det for row in rows]
        decreasing = all(b < a + 1e-12 for a, b in zip(vals, vals[1:]))
        checks.append(_check(f"rho-monotone-r{r}", decreasing, f"range [{vals[-1]:.6f}, {vals[0]:.6f}]"))
        tiny = det_rho_sweep(r, [1e-6 * math.pi / r])[0].log_abs_det
        gap = abs(tiny - nodal_logdet_chebu(r))
        checks.append(_check(f"rho-zero-limit-r{r}", gap <= 1e-4, f"log-det gap to nodal {gap:.2e}"))
    return checks


def _suite_lebesgue(seed: int):
    checks = []
    est = lebesgue_constant(SupportSet.from_nodes([-1.0, 0.0, 1.0]), BasisKind.MONOMIAL, Mode.NODAL)
    checks.append(_check("lebesgue-three-nodes", abs(est.value - 1.25) <= 1e-9, f"value {est.value:.12f}"))
    est = lebesgue_constant(SupportSet.from_nodes(lgl_nodes(20)), BasisKind.CHEBYSHEV_U, Mode.NODAL)
    ok = lower_bound_floor(20) <= est.value <= math.sqrt(20.0)
    checks.append(_check("lebesgue-lgl-r20-bounds", ok, f"value {est.value:.6f} in [floor, sqrt(20)]"))
    sset = families.support_family("c1-fekete", 8)
    seg = lebesgue_constant(sset, BasisKind.CHEBYSHEV_U, Mode.SEGMENTAL)
    nor = lebesgue_constant(sset, BasisKind.CHEBYSHEV_U, Mode.NORMALIZED)
    gap = abs(seg.value - nor.value)
    checks.append(_check("lebesgue-mode-consistency", gap <= 1e-10, f"|segmental - normalized| {gap:.2e}"))
    return checks


_SUITES = {
    "det": _suite_det,
    "lagrange": _suite_lagrange,
    "fejer": _suite_fejer,
    "rho": _suite_rho,
    "lebesgue": _suite_lebesgue,
}


def cmd_verify(args) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    suites = []
    all_passed = True
    for name in names:
        checks = _SUITES[name](args.seed)
        passed = all(c["passed"] for c in checks)
        all_passed &= passed
        suites.append({"suite": name, "passed": passed, "checks": checks})
    _write(_dumps({"passed": all_passed, "suites": suites}), args.out)
    if not all_passed:
        failures = [
            c["name"] for s in suites for c in s["checks"] if not c["passed"]
        ]
        print("failed invariants: " + ", ".join(failures), file=sys.stderr)
        return 1
    return 0


_COMMANDS = {
    "nodes": cmd_nodes,
    "segments": cmd_segments,
    "lebesgue": cmd_lebesgue,
    "table1": cmd_table1,
    "rho-sweep": cmd_rho_sweep,
    "interp": cmd_interp,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FeketeError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
