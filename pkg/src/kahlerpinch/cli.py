"""Command-line front end: verification runs, sweeps, and JSON/CSV reports.

Exit codes: 0 when every check passes, 1 when a verification fails, 2 on
usage or parameter errors.  JSON reports carry a top-level schema version so
downstream regression tooling can pin the layout.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import hirzebruch
from .berger import SphereSampleConfig, berger_vs_trace, default_points
from .geometry import check_symmetries, curvature_tensor, ricci, scalar_curvature
from .models import FubiniStudy, Hitchin, MetricModel, Product, model_from_json, model_to_json
from .optimize import extremize_direction, sweep_fiber, sweep_s
from .products import CommonBoundError, verify_product_numeric

SCHEMA_VERSION = 1


class UsageError(ValueError):
    """Bad parameter or model descriptor supplied on the command line."""


def _parse_s(text: str):
    """Family parameter: exact fraction 'p/q' or a decimal literal."""
    try:
        if "/" in text:
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse s value {text!r}") from exc


def _parse_model(text: str) -> MetricModel:
    """Model shorthand: fs<m>, hitchin:<n>:<s>, product:<a>:<b>, or JSON."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return model_from_json(json.loads(text))
        if text.startswith("fs"):
            return FubiniStudy(int(text[2:]))
        if text.startswith("hitchin:"):
            _, n, s = text.split(":")
            return Hitchin.make(int(n), _parse_s(s))
        if text.startswith("product:"):
            _, a, b = text.split(":", 2)
            return Product(_parse_model(a), _parse_model(b))
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot parse model {text!r}: {exc}") from exc
    raise UsageError(f"unknown model {text!r}")


def _parse_point(text: str, m: int) -> np.ndarray:
    try:
        coords = [complex(part.strip().replace(" ", "")) for part in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse point {text!r}") from exc
    if len(coords) != m:
        raise UsageError(f"point has {len(coords)} coordinates, model needs {m}")
    return np.array(coords, dtype=complex)


def _c2j(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def _rel_err(value: float, target: float) -> float:
    return abs(value - target) / max(abs(target), 1e-300)


def _envelope(command: str, params: dict, results: dict, passed: bool) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "results": results,
        "pass": bool(passed),
    }


def _emit(payload: dict, rows, args) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows is None:
            writer.writerow(("key", "value"))
            for key, value in payload["results"].items():
                writer.writerow((key, value))
        else:
            for row in rows:
                writer.writerow(row)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _hitchin_from_args(args) -> Hitchin:
    if args.n < 1:
        raise UsageError("n must be >= 1")
    s = _parse_s(args.s) if args.s is not None else hirzebruch.optimal_s(args.n)[0]
    model = Hitchin.make(args.n, s)
    hirzebruch.require_admissible(model.n, s)
    return model


def cmd_pinch(args):
    model = _hitchin_from_args(args)
    if args.grid < 2:
        raise UsageError("grid must be >= 2")
    s = model.s_exact if model.s_exact is not None else model.s
    report = sweep_fiber(model, grid=args.grid, seed=args.seed)
    ana_min, ana_max = (float(x) for x in hirzebruch.min_max_hsc(model.n, s))
    ana_pinch = float(hirzebruch.pinching(model.n, s))
    rel = {
        "min_K": _rel_err(report.min_K, ana_min),
        "max_K": _rel_err(report.max_K, ana_max),
        "pinching": _rel_err(report.pinching, ana_pinch),
    }
    checks = {
        "min_K": rel["min_K"] <= 1e-4,
        "max_K": rel["max_K"] <= 1e-9,
        "pinching": rel["pinching"] <= args.tol,
    }
    results = report.to_json_dict()
    results.update(
        is_hodge=model.is_hodge,
        analytic={"min_K": ana_min, "max_K": ana_max, "pinching": ana_pinch},
        rel_err=rel,
        checks=checks,
    )
    params = {
        "n": model.n,
        "s": str(model.s_exact) if model.s_exact is not None else model.s,
        "grid": args.grid,
        "tol": args.tol,
        "seed": args.seed,
    }
    passed = all(checks.values())
    return _envelope("pinch", params, results, passed), report.csv_rows(), passed


def cmd_sweep_s(args):
    if args.n < 1:
        raise UsageError("n must be >= 1")
    if args.points < 1:
        raise UsageError("empty parameter grid")
    result = sweep_s(args.n, points=args.points)
    s_star = float(hirzebruch.optimal_s(args.n)[0])
    within = abs(result.argmax_s - s_star) <= result.cell_width
    results = {
        "argmax_s": result.argmax_s,
        "argmax_pinching": result.argmax_pinching,
        "analytic_s_star": s_star,
        "cell_width": result.cell_width,
        "within_one_cell": within,
        "unimodal": result.unimodal,
    }
    params = {"n": args.n, "points": args.points}
    passed = within and result.unimodal
    return _envelope("sweep-s", params, results, passed), result.csv_rows(), passed


def cmd_berger(args):
    model = _parse_model(args.model)
    cfg = SphereSampleConfig(
        sample_count=args.samples, seed=args.seed, antithetic=args.antithetic
    )
    if args.point:
        points = [_parse_point(p, model.dimension) for p in args.point]
    else:
        points = default_points(model)
    bracket = None
    if isinstance(model, Hitchin):
        s = model.s_exact if model.s_exact is not None else model.s
        bracket = tuple(float(x) for x in hirzebruch.scalar_bounds(model.n, s))
    rows = berger_vs_trace(model, points, cfg, bracket=bracket)
    passed = all(
        (abs(r.zscore) < args.zmax or r.near_exact)
        and (r.within_bracket is not False)
        for r in rows
    )
    results = {
        "bracket": list(bracket) if bracket else None,
        "rows": [
            {
                "point": [_c2j(c) for c in r.point],
                "estimate": r.estimate,
                "stderr": r.stderr,
                "trace_tau": r.trace_tau,
                "zscore": r.zscore if math.isfinite(r.zscore) else None,
                "within_bracket": r.within_bracket,
            }
            for r in rows
        ],
    }
    params = {
        "model": model_to_json(model),
        "samples": args.samples,
        "seed": args.seed,
        "antithetic": args.antithetic,
        "zmax": args.zmax,
    }

    def csv_rows():
        yield ("point", "estimate", "stderr", "trace_tau", "zscore")
        for r in rows:
            point = ";".join(str(c) for c in r.point)
            yield (point, r.estimate, r.stderr, r.trace_tau, r.zscore)

    return _envelope("berger", params, results, passed), csv_rows(), passed


def cmd_product(args):
    left = _parse_model(args.left)
    right = _parse_model(args.right)
    report = verify_product_numeric(
        left, right, samples=args.samples, tol=args.tol, seed=args.seed
    )
    results = report.to_json_dict()
    params = {
        "left": model_to_json(left),
        "right": model_to_json(right),
        "samples": args.samples,
        "tol": args.tol,
        "seed": args.seed,
    }

    def csv_rows():
        yield ("key", "value")
        for key, value in results.items():
            yield (key, value)

    return _envelope("product", params, results, report.agree), csv_rows(), report.agree


def cmd_curvature(args):
    model = _parse_model(args.model)
    m = model.dimension
    z = _parse_point(args.point, m) if args.point else np.zeros(m, dtype=complex)
    jet = model.metric_jet(z)
    R = curvature_tensor(jet)
    ric = ricci(R, jet.g)
    sym = check_symmetries(R, jet)
    ex = extremize_direction(R, jet.g, seed=args.seed)
    components = [
        {"i": i, "j": j, "k": k, "l": l, "value": _c2j(R[i, j, k, l])}
        for i in range(m)
        for j in range(m)
        for k in range(m)
        for l in range(m)
        if abs(R[i, j, k, l]) > 1e-12
    ]
    results = {
        "g": [[_c2j(v) for v in row] for row in jet.g],
        "curvature_components": components,
        "ricci_eigenvalues": [float(v) for v in np.linalg.eigvalsh(ric)],
        "scalar_curvature": scalar_curvature(R, jet.g),
        "hsc_min": ex.min_K,
        "hsc_max": ex.max_K,
        "max_symmetry_violation": sym.max_violation,
    }
    params = {
        "model": model_to_json(model),
        "point": [_c2j(c) for c in z],
        "seed": args.seed,
    }

    def csv_rows():
        yield ("key", "value")
        yield ("scalar_curvature", results["scalar_curvature"])
        yield ("hsc_min", ex.min_K)
        yield ("hsc_max", ex.max_K)
        for idx, val in enumerate(results["ricci_eigenvalues"]):
            yield (f"ricci_eigenvalue_{idx}", val)

    return _envelope("curvature", params, results, True), csv_rows(), True


def _verify_row(n: int, args) -> dict:
    s_star, p_star = hirzebruch.optimal_s(n)
    model = Hitchin.make(n, s_star)
    report = sweep_fiber(model, grid=args.grid, seed=args.seed)
    rel_pinch = _rel_err(report.pinching, float(p_star))

    bounds = hirzebruch.case_bounds(n, s_star)
    chain = bounds.chain
    chain_ok = bounds.strictly_decreasing if n >= 2 else all(
        x >= y for x, y in zip(chain, chain[1:])
    )

    bracket = tuple(float(x) for x in hirzebruch.scalar_bounds(n, s_star))
    cfg = SphereSampleConfig(sample_count=args.samples, seed=args.seed)
    points = [model.fiber_point(r) for r in (0.0, 1.0, 9.0)]
    rows = berger_vs_trace(model, points, cfg, bracket=bracket)
    max_z = max(abs(r.zscore) for r in rows)
    berger_ok = all(abs(r.zscore) < args.zmax or r.near_exact for r in rows)
    bracket_ok = all(r.within_bracket for r in rows)

    a_inf = 2 * n / (2 * n + 1)
    b_inf = (1 + n) / (1 + 3 * n + 2 * n * n)
    wmin = report.argmin["weights"]
    weights_ok = (
        report.argmin["t"] == 1.0
        and abs(wmin[0] - a_inf) <= 1e-3
        and abs(wmin[1] - b_inf) <= 1e-3
        and report.argmax["weights"][0] <= 1e-6
    )

    ts = np.linspace(0.0, 1.0, 65)
    eigs = []
    for t in ts:
        r = math.inf if t >= 1.0 else t / (1.0 - t)
        eigs.extend(hirzebruch.ricci_fiber_eigenvalues(n, float(s_star), r))
    min_eig = min(eigs)
    ricci_ok = (min_eig <= 0.0) if n >= 2 else (min_eig > 0.0)

    passed = (
        rel_pinch <= args.tol
        and chain_ok
        and berger_ok
        and bracket_ok
        and weights_ok
        and ricci_ok
    )
    return {
        "n": n,
        "s_star": str(s_star),
        "analytic_pinching": float(p_star),
        "numeric_pinching": report.pinching,
        "rel_pinch_err": rel_pinch,
        "chain_ok": bool(chain_ok),
        "berger_max_abs_z": max_z,
        "berger_ok": bool(berger_ok),
        "scalar_bracket_ok": bool(bracket_ok),
        "limit_weights_ok": bool(weights_ok),
        "min_ricci_eigenvalue": float(min_eig),
        "ricci_sign_ok": bool(ricci_ok),
        "pass": bool(passed),
    }


def cmd_verify(args):
    if args.n_max < 1:
        raise UsageError("n-max must be >= 1")
    rows = [_verify_row(n, args) for n in range(1, args.n_max + 1)]
    passed = all(row["pass"] for row in rows)
    params = {
        "n_max": args.n_max,
        "grid": args.grid,
        "samples": args.samples,
        "seed": args.seed,
        "tol": args.tol,
        "zmax": args.zmax,
    }

    def csv_rows():
        header = list(rows[0].keys())
        yield tuple(header)
        for row in rows:
            yield tuple(row[key] for key in header)

    return _envelope("verify", params, {"rows": rows}, passed), csv_rows(), passed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kahlerpinch",
        description="Curvature pinching certification for built-in Kahler metric models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("pinch", help="sweep one Hirzebruch family member and certify")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", default=None, help="family parameter, decimal or p/q (default optimal)")
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--tol", type=float, default=1e-6)
    common(p)

    p = sub.add_parser("sweep-s", help="scan the family parameter for the best pinching")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--points", type=int, default=999)
    common(p)

    p = sub.add_parser("verify", help="run the full verification table for n = 1..n_max")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--zmax", type=float, default=3.0)
    common(p)

    p = sub.add_parser("berger", help="Monte Carlo scalar-curvature comparison")
    p.add_argument("--model", required=True, help="fs<m> | hitchin:<n>:<s> | product:a:b | JSON")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--zmax", type=float, default=3.0)
    p.add_argument("--antithetic", action="store_true")
    p.add_argument("--point", action="append", default=None, help="chart point, e.g. '0.3+0.1j,0.5'")
    common(p)

    p = sub.add_parser("product", help="verify the product pinching formula numerically")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-6)
    common(p)

    p = sub.add_parser("curvature", help="curvature quantities of a model at a point")
    p.add_argument("--model", required=True)
    p.add_argument("--point", default=None)
    common(p)

    return parser


_DISPATCH = {
    "pinch": cmd_pinch,
    "sweep-s": cmd_sweep_s,
    "verify": cmd_verify,
    "berger": cmd_berger,
    "product": cmd_product,
    "curvature": cmd_curvature,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, rows, passed = _DISPATCH[args.command](args)
    except (UsageError, hirzebruch.AdmissibilityError, CommonBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(payload, rows if args.format == "csv" else None, args)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
