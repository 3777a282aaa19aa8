"""Command-line front end.

Subcommands: eval, coeffs, transform, invert, euclid, verify.  All artifacts
are deterministic given the config (seeds are explicit and recorded); CSV
files carry a fixed header row and %.17g floats, JSON reports carry a
schema_version and sorted keys, so both diff cleanly as regression baselines.

Exit codes: 0 success, 2 usage (argparse), 3 invalid configuration,
4 I/O failure, 5 numerical failure (including a failing `verify`).

The default output directory is $POISWAV_OUTPUT_DIR (falling back to the
working directory); figures are opt-in via --figures and are rendered next
to the delimited output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import asymptotics, coefficients, transform, verification, wavelets
from .errors import DomainError
from .quadrature import log_scale_grid
from .special_functions import SphereContext

FLOAT_FMT = "%.17g"
SCHEMA_VERSION = 1


def _fmt(x) -> str:
    return FLOAT_FMT % float(x)


def _parse_range(text: str, flag: str):
    """'lo:hi:count' with 'pi' accepted as a bound."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"{flag} expects LO:HI:COUNT, got {text!r}")

    def num(s: str) -> float:
        s = s.strip().lower()
        return math.pi if s == "pi" else float(s)

    lo, hi = num(parts[0]), num(parts[1])
    count = int(parts[2])
    if count < 2:
        raise DomainError(f"{flag} needs at least 2 points, got {count}")
    if not lo < hi:
        raise DomainError(f"{flag} needs LO < HI, got {text!r}")
    return lo, hi, count


def _out_path(args, default_name: str) -> str:
    out_dir = args.output_dir or os.environ.get("POISWAV_OUTPUT_DIR") or "."
    name = getattr(args, "output", None) or default_name
    path = name if os.path.isabs(name) else os.path.join(out_dir, name)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    return path


def _write_csv(path: str, header: list, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) if not isinstance(x, str) else x for x in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _write_json(path: str, payload: dict) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _sidecar(path: str, suffix: str) -> str:
    stem, _ = os.path.splitext(path)
    return stem + suffix


def _parallel_map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _load_zonal(args, ctx: SphereContext):
    """Zonal input from --input JSON, else seeded random band-limited."""
    if getattr(args, "input", None):
        with open(args.input, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        if int(payload.get("n", -1)) != ctx.n:
            raise DomainError(f"input function lives on S^{payload.get('n')}, requested n={ctx.n}")
        coeffs = payload.get("coeffs")
        if not isinstance(coeffs, list) or not coeffs:
            raise DomainError("input JSON must provide a nonempty 'coeffs' list")
        return transform.ZonalFunction(ctx=ctx, coeffs=tuple(float(c) for c in coeffs)), {"source": args.input}
    f = transform.random_zonal(ctx, args.l_max, args.seed)
    return f, {"source": "random", "l_max": args.l_max, "seed": args.seed}


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------


def _cmd_eval(args) -> int:
    ctx = SphereContext(args.n)
    spec = wavelets.WaveletSpec(ctx=ctx, m=args.m, a=args.a, flavor=args.flavor)
    lo, hi, count = _parse_range(args.theta_grid, "--theta-grid")
    if lo < 0.0 or hi > math.pi + 1e-12:
        raise DomainError("--theta-grid must lie within [0, pi]")
    theta = np.linspace(lo, hi, count)
    t = np.cos(theta)

    path = _out_path(args, "eval.csv")
    if args.repr == "all":
        res = wavelets.evaluate_all(spec, t, tol=args.tol)
        header = ["theta", "series", "closed", "continuation", "multipole", "max_pairwise_rel_err"]
        rows = zip(theta, res["series"], res["closed"], res["continuation"], res["multipole"], res["pointwise_rel_err"])
        columns = {name: res[name] for name in ("series", "closed", "continuation", "multipole")}
    else:
        values = wavelets.evaluate(spec, t, representation=args.repr, tol=args.tol)
        header = ["theta", "value"]
        rows = zip(theta, values)
        columns = {args.repr: values}
    _write_csv(path, header, rows)
    print(f"wrote {path}")
    if args.figures:
        from . import plots

        fig = plots.save_eval_figure(
            _sidecar(path, ".png"), theta, columns, f"n={ctx.n}, m={args.m}, a={args.a}, flavor={args.flavor}"
        )
        print(f"wrote {fig}")
    return 0


def _cmd_coeffs(args) -> int:
    if args.symbolic_n:
        n = None
    else:
        if args.n is None:
            raise DomainError("coeffs needs --n N or --symbolic-n")
        n = args.n
    alpha = coefficients.build_alpha_table(args.m)
    table = coefficients.build_r_table(args.m, n=n)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "m": args.m,
        "n": n,
        "alpha": [list(row) for row in alpha.rows],
        "R": table.to_json_dict()["R"],
    }
    path = _out_path(args, "coeffs.json")
    _write_json(path, payload)
    print(f"wrote {path}")
    return 0


def _cmd_transform(args) -> int:
    ctx = SphereContext(args.n)
    f, source = _load_zonal(args, ctx)
    spec = wavelets.WaveletSpec(ctx=ctx, m=args.m, a=1.0, flavor=args.flavor)
    grid = log_scale_grid(args.a_min, args.a_max, args.a_count)
    field = transform.forward_spectral(f, spec, grid)

    lo, hi, count = _parse_range(args.theta_grid, "--theta-grid")
    theta = np.linspace(lo, hi, count)
    t = np.cos(theta)
    samples = np.array(_parallel_map(lambda i: field.spatial(i, t), list(range(grid.count)), args.threads))

    path = _out_path(args, "transform.csv")
    rows = []
    for i, a in enumerate(grid.nodes):
        for j, th in enumerate(theta):
            rows.append((a, th, samples[i, j]))
    _write_csv(path, ["a", "theta", "value"], rows)
    meta = {
        "schema_version": SCHEMA_VERSION,
        "n": ctx.n,
        "m": args.m,
        "flavor": args.flavor,
        "a_min": args.a_min,
        "a_max": args.a_max,
        "a_count": args.a_count,
        "input": source,
    }
    meta_path = _write_json(_sidecar(path, ".json"), meta)
    print(f"wrote {path}")
    print(f"wrote {meta_path}")
    if args.figures:
        from . import plots

        fig = plots.save_transform_figure(
            _sidecar(path, ".png"), grid.nodes, theta, samples, f"n={ctx.n}, m={args.m}, flavor={args.flavor}"
        )
        print(f"wrote {fig}")
    return 0


def _cmd_invert(args) -> int:
    ctx = SphereContext(args.n)
    f, source = _load_zonal(args, ctx)
    spec = wavelets.WaveletSpec(ctx=ctx, m=args.m, a=1.0, flavor=args.flavor)
    grid = log_scale_grid(args.a_min, args.a_max, args.a_count)
    field = transform.forward_spectral(f, spec, grid)
    if args.kind == "bilinear":
        recon, report = transform.invert_bilinear(field, original=f)
    else:
        recon, report = transform.invert_linear(field, original=f)
    report["input"] = source
    report["reconstructed_coeffs"] = list(recon.coeffs)
    report["original_coeffs"] = list(f.coeffs)

    path = _out_path(args, "invert.json")
    _write_json(path, report)
    print(f"wrote {path}")
    if args.figures:
        from . import plots

        degrees = np.arange(1, f.l_max + 1)
        fig = plots.save_invert_figure(
            _sidecar(path, ".png"),
            degrees,
            report["per_degree_ratio"],
            report["predicted_ratio"],
            f"{args.kind} inversion, n={ctx.n}, m={args.m}, flavor={args.flavor}",
        )
        print(f"wrote {fig}")
    return 0


def _cmd_euclid(args) -> int:
    ctx = SphereContext(args.n)
    s = np.linspace(0.0, args.s_max, args.s_count)
    profile = asymptotics.euclidean_limit(ctx, args.m, s)
    path = _out_path(args, "euclid.csv")
    _write_csv(path, ["s", "profile"], zip(s, profile))
    print(f"wrote {path}")

    a_list = [float(x) for x in args.a_list.split(",")] if args.a_list else [0.04, 0.02, 0.01, 0.005]
    report = {
        "schema_version": SCHEMA_VERSION,
        "n": ctx.n,
        "m": args.m,
        "convergence": asymptotics.euclidean_convergence_report(ctx, args.m, a_list=a_list),
        "zero_mean": asymptotics.zero_mean_check(ctx, args.m),
        "decay_slope": asymptotics.decay_slope(ctx, args.m),
    }
    if args.localization:
        report["localization"] = asymptotics.localization_report(ctx, args.m)
    report_path = _write_json(_sidecar(path, ".json"), report)
    print(f"wrote {report_path}")

    if args.figures:
        from . import plots

        rescaled = {}
        for a in a_list:
            spec = wavelets.WaveletSpec(ctx=ctx, m=args.m, a=a, flavor="raw")
            theta = asymptotics.stereographic_colatitude(a * s)
            rescaled[f"a={a:g}"] = a**ctx.n * wavelets.eval_closed(spec, np.cos(theta))
        fig = plots.save_euclid_figure(_sidecar(path, ".png"), s, profile, rescaled, f"n={ctx.n}, m={args.m}")
        print(f"wrote {fig}")
    return 0


def _cmd_verify(args) -> int:
    ctx = SphereContext(args.n)
    suite_fns = [
        lambda: verification.special_functions_suite(ctx, args.fast),
        lambda: verification.quadrature_suite(ctx, args.fast),
        lambda: verification.coefficients_suite(ctx, args.fast),
        lambda: verification.kernels_suite(ctx, args.fast),
        lambda: verification.wavelets_suite(ctx, args.fast),
        lambda: verification.transform_suite(ctx, args.fast),
        lambda: verification.asymptotics_suite(ctx, args.fast),
    ]
    suites = _parallel_map(lambda fn: fn(), suite_fns, args.threads)
    report = {
        "schema_version": SCHEMA_VERSION,
        "n": ctx.n,
        "m": args.m,
        "fast": bool(args.fast),
        "suites": suites,
        "passed": all(s["passed"] for s in suites),
    }
    path = _out_path(args, "verify.json")
    _write_json(path, report)

    for suite in suites:
        mark = "PASS" if suite["passed"] else "FAIL"
        print(f"[{mark}] {suite['name']}")
        for check in suite["checks"]:
            mark = "pass" if check["passed"] else "FAIL"
            print(f"    {mark}  {check['name']}: {check['detail']}")
    print(f"wrote {path}")
    if not report["passed"]:
        print("verification FAILED", file=sys.stderr)
        return 5
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--output", "-o", help="artifact filename (relative paths land in the output dir)")
    p.add_argument("--output-dir", help="output directory (default: $POISWAV_OUTPUT_DIR or '.')")
    p.add_argument("--figures", action="store_true", help="also render matplotlib PNGs next to the data")
    p.add_argument("--threads", type=int, default=1, help="cap for internal sweep parallelism")


def _add_scale_grid(p: argparse.ArgumentParser):
    p.add_argument("--a-min", type=float, default=1e-3)
    p.add_argument("--a-max", type=float, default=40.0)
    p.add_argument("--a-count", type=int, default=240)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poiswav", description="Poisson wavelets on n-spheres: evaluation, transforms, limits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a wavelet over a colatitude grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--repr", choices=list(wavelets.REPRESENTATIONS) + ["all"], default="closed")
    p.add_argument("--flavor", choices=wavelets.FLAVORS, default="raw")
    p.add_argument("--theta-grid", default="0.001:pi:200")
    p.add_argument("--tol", type=float, default=1e-12)
    _add_common(p)
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("coeffs", help="dump alpha and closed-form coefficient tables as JSON")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--symbolic-n", action="store_true", help="keep coefficients as polynomials in n")
    _add_common(p)
    p.set_defaults(handler=_cmd_coeffs)

    p = sub.add_parser("transform", help="wavelet transform of a zonal function over a scale grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--flavor", choices=wavelets.FLAVORS, default="bilinear")
    p.add_argument("--input", help="zonal function JSON {'n': ..., 'coeffs': [...]}")
    p.add_argument("--l-max", type=int, default=10)
    p.add_argument("--seed", type=int, default=20240901)
    p.add_argument("--theta-grid", default="0:pi:121")
    _add_scale_grid(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_transform)

    p = sub.add_parser("invert", help="reconstruct a zonal function from its transform")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kind", choices=["bilinear", "linear"], default="bilinear")
    p.add_argument("--flavor", choices=wavelets.FLAVORS, default="bilinear")
    p.add_argument("--input", help="zonal function JSON {'n': ..., 'coeffs': [...]}")
    p.add_argument("--l-max", type=int, default=10)
    p.add_argument("--seed", type=int, default=20240901)
    _add_scale_grid(p)
    _add_common(p)
    p.set_defaults(handler=_cmd_invert)

    p = sub.add_parser("euclid", help="Euclidean limit profile, convergence and zero-mean reports")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--s-max", type=float, default=20.0)
    p.add_argument("--s-count", type=int, default=401)
    p.add_argument("--a-list", help="comma-separated decreasing scales for the convergence table")
    p.add_argument("--localization", action="store_true", help="include the localization statistics block")
    _add_common(p)
    p.set_defaults(handler=_cmd_euclid)

    p = sub.add_parser("verify", help="run all property suites and exit nonzero on failure")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--fast", action="store_true", help="smaller grids, same suites")
    _add_common(p)
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 3
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
