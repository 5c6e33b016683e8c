"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .consistency import Scheme, order_in_norm, parse_norm
from .errors import LmmError, UsageError
from .integrator import integrate, oscillation_demo
from .methods import PROBLEMS, GridSpec, catalog, get_method, load_method
from .norms import INF_INF, INF_SPIJKER, NormPair, norm_kinf, norm_kspijker, stability_constant
from .operators import apply_F, dense_A, dense_B, factorization_residual, make_bundle, write_matrix_csv
from .roots import Verdict, classify, find_roots
from .witness import ratio_sweep, spijker_witness, weak_witness

DEFAULT_N_LIST = {
    "stability-constant": "8,16,32,64,128",
    "witness": "64,128,256,512,1024,2048,4096",
    "consistency": "20,40,80,160,320",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_n_list(text: str) -> list[int]:
    try:
        ns = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--n-list: not a comma-separated list of integers: {text!r}") from None
    if not ns:
        raise UsageError("--n-list: empty")
    if any(n < 1 for n in ns):
        raise UsageError("--n-list: sizes must be positive")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise UsageError(f"--n-list: must be strictly increasing, got {text!r}")
    return ns


def _method(args):
    if getattr(args, "method_file", None):
        return load_method(args.method_file)
    if not getattr(args, "method", None):
        raise UsageError("--method or --method-file is required")
    return get_method(args.method)


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _emit(args, columns, rows, summary=None):
    """Write a table (CSV or JSON) to --out or stdout; CSV summaries go to a sidecar or stderr."""
    if args.format == "json":
        doc = {"columns": columns, "rows": [list(r) for r in rows]}
        if summary is not None:
            doc["summary"] = summary
        text = json.dumps(doc, indent=2) + "\n"
        _write(args.out, text)
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    _write(args.out, buf.getvalue())
    if summary is not None:
        text = json.dumps(summary, indent=2) + "\n"
        if args.out:
            _write(str(Path(args.out).with_suffix(".summary.json")), text)
        else:
            sys.stderr.write(text)


def _write(path, text):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _complex_pair(z):
    return [float(z.real), float(z.imag)]


def cmd_classify(args):
    m = _method(args)
    rs = find_roots(m, args.root_tol)
    sc = classify(rs, args.unit_tol)
    doc = {
        "method": m.name,
        "alpha": list(m.alpha),
        "beta": list(m.beta),
        "roots": [_complex_pair(z) for z in rs.roots],
        "residuals": list(rs.residuals),
        "boundary_roots": [_complex_pair(z) for z in sc.boundary_roots],
        "verdict": sc.verdict.value,
    }
    if sc.reason:
        doc["reason"] = sc.reason
    _write(args.out, json.dumps(doc, indent=2) + "\n")


def cmd_stability_constant(args):
    m = _method(args)
    pair = NormPair.parse(args.pair)
    ns = parse_n_list(args.n_list)
    rows = [(n, stability_constant(make_bundle(m, n, args.T), pair)) for n in ns]
    if args.dump_matrix:
        b = make_bundle(m, ns[0], args.T)
        stem = Path(args.dump_matrix)
        write_matrix_csv(dense_A(b), stem.with_name(stem.name + "_A.csv"))
        write_matrix_csv(dense_B(b), stem.with_name(stem.name + "_B.csv"))
    _emit(args, ["n", "S_n"], rows)


def cmd_witness(args):
    m = _method(args)
    ns = parse_n_list(args.n_list)
    if args.construction == "spijker":
        if m.name != "midpoint":
            raise UsageError("--construction spijker applies to the midpoint method only")
        rows = []
        for n in ns:
            u = spijker_witness(n)
            b = make_bundle(m, n, args.T)
            img = norm_kspijker(apply_F(b, lambda v: 0.0, u), b.h)
            unorm = norm_kinf(u)
            rows.append((n, unorm / img, img, unorm))
        ratios = [r[1] for r in rows]
        summary = {
            "method": m.name,
            "construction": "spijker",
            "monotone": all(b > a for a, b in zip(ratios, ratios[1:])),
        }
    else:
        sweep = ratio_sweep(m, find_roots(m), ns, args.T)
        rows = [(r.n, r.ratio, r.image_spijker_norm, r.u_inf_norm) for r in sweep.reports]
        summary = sweep.summary()
        summary["construction"] = "weak"
    _emit(args, ["n", "ratio", "image_norm", "u_inf_norm"], rows, summary)


def _scheme(args):
    name = args.scheme or args.method
    if args.method_file:
        return Scheme.lmm(load_method(args.method_file))
    if not name:
        raise UsageError("--scheme is required")
    if name.lower() in ("alt-euler", "alternating-euler"):
        return Scheme.alternating_euler()
    return Scheme.lmm(get_method(name))


def _problem(args):
    try:
        make = PROBLEMS[args.problem]
    except KeyError:
        raise UsageError(f"--problem must be one of {sorted(PROBLEMS)}") from None
    return make(T=args.T)


def cmd_consistency(args):
    s = _scheme(args)
    p = _problem(args)
    est = order_in_norm(s, p, parse_norm(args.norm), parse_n_list(args.n_list))
    rows = list(zip(est.step_sizes, est.defect_norms))
    summary = {"scheme": s.name, "problem": p.name, "norm": est.norm.value, "slope": est.slope}
    _emit(args, ["h", "defect_norm"], rows, summary)


def _trajectory_rows(grid, values, exact):
    t = grid.times()
    return [(float(t[i]), float(values[i]), float(exact[i]), float(values[i] - exact[i])) for i in range(len(t))]


def cmd_integrate(args):
    m = _method(args)
    p = _problem(args)
    g = GridSpec(m.k, args.n, args.T)
    run = integrate(m, p, g, args.start)
    exact = np.array([p.exact(t) for t in g.times()]) if p.exact else np.full(g.size, np.nan)
    summary = {
        "method": m.name,
        "problem": p.name,
        "h": g.h,
        "final_error": float(abs(run.final - p.exact(p.T))) if p.exact else None,
        "max_newton_iters": max(run.newton_iters, default=0),
    }
    _emit(args, ["t", "u", "exact", "error"], _trajectory_rows(g, run.trajectory.values, exact), summary)


def cmd_demo_oscillation(args):
    m = _method(args)
    p = _problem(args)
    g = GridSpec(m.k, args.n, args.T)
    demo = oscillation_demo(m, p, g, args.perturbation)
    summary = {
        "method": m.name,
        "perturbation": args.perturbation,
        "h": g.h,
        "parasitic_amplitude": demo.parasitic_amplitude,
    }
    _emit(args, ["t", "u", "exact", "error"], _trajectory_rows(g, demo.run.trajectory.values, demo.exact), summary)


def reproduce_report(seed: int = 0, T: float = 1.0) -> dict:
    """Evidence for both instability results plus the cited positive results."""
    midpoint = get_method("midpoint")
    t1_rows = []
    for n in (4, 50, 500):
        u = spijker_witness(n)
        b = make_bundle(midpoint, n, T)
        img = norm_kspijker(apply_F(b, lambda v: 0.0, u), b.h)
        t1_rows.append({"n": n, "u_norm": norm_kinf(u), "image_norm": img, "ratio": norm_kinf(u) / img})
    theorem1 = {
        "method": "midpoint",
        "rows": t1_rows,
        "image_norm": t1_rows[0]["image_norm"],
        "image_norm_is_half": all(abs(r["image_norm"] - 0.5) <= 1e-12 for r in t1_rows),
        "u_norm_equals_n": all(r["u_norm"] == r["n"] for r in t1_rows),
    }

    classes = {}
    theorem2 = {}
    sweep_ns = [64 * 2 ** j for j in range(7)]
    for m in catalog():
        rs = find_roots(m)
        sc = classify(rs)
        classes[m.name] = sc.verdict.value
        if sc.verdict is not Verdict.WEAKLY_STABLE:
            continue
        sweep = ratio_sweep(m, rs, sweep_ns, T)
        oracle = []
        for n in (64, 128, 256):
            S = stability_constant(make_bundle(m, n, T), INF_SPIJKER)
            oracle.append({"n": n, "ratio": weak_witness(m, rs, n, T).ratio, "S_n": S})
        ratios = dict(sweep.rows)
        entry = sweep.summary()
        entry["rows"] = [{"n": n, "ratio": r} for n, r in sweep.rows]
        entry["growth_4096_over_64"] = ratios[4096] / ratios[64]
        entry["oracle"] = oracle
        entry["witness_below_oracle"] = all(o["ratio"] <= o["S_n"] + 1e-9 for o in oracle)
        theorem2[m.name] = entry

    positive = {}
    for pair in (INF_INF, INF_SPIJKER):
        block = {}
        for name in ("midpoint", "AB2", "BDF2"):
            m = get_method(name)
            s128 = stability_constant(make_bundle(m, 128, T), pair)
            s256 = stability_constant(make_bundle(m, 256, T), pair)
            block[name] = {"S_128": s128, "S_256": s256, "ratio": s256 / s128}
        positive[pair.label] = block

    rng = np.random.default_rng(seed)
    factorization = {}
    for m in catalog():
        rs = find_roots(m)
        b = make_bundle(m, 200, T)
        worst = 0.0
        for _ in range(100):
            u = rng.standard_normal(200)
            worst = max(worst, factorization_residual(b, rs, u) / np.max(np.abs(u)))
        factorization[m.name] = worst

    alt = Scheme.alternating_euler()
    p = PROBLEMS["growth"](T=T)
    ns = [20, 40, 80, 160, 320]
    consistency = {
        "alt-euler": {
            "spijker_slope": order_in_norm(alt, p, "spijker", ns).slope,
            "inf_slope": order_in_norm(alt, p, "inf", ns).slope,
        }
    }
    return {
        "version": __version__,
        "seed": seed,
        "T": T,
        "classification": classes,
        "theorem1": theorem1,
        "theorem2": theorem2,
        "positive_results": positive,
        "factorization_relative_residual": factorization,
        "consistency": consistency,
    }


def cmd_reproduce(args):
    report = reproduce_report(args.seed, args.T)
    _write(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lmmstab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def common(p, method=True, n_list=None, fmt=True):
        if method:
            p.add_argument("--method", help="catalog method name")
            p.add_argument("--method-file", help="JSON file {name, alpha, beta}")
        if n_list is not None:
            p.add_argument("--n-list", default=n_list, help="strictly increasing comma-separated sizes")
        p.add_argument("--T", type=float, default=1.0, help="horizon")
        p.add_argument("--out", help="output path (default: stdout)")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("classify", help="roots of rho and the root-condition verdict")
    common(p, fmt=False)
    p.add_argument("--root-tol", type=float, default=1e-10)
    p.add_argument("--unit-tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("stability-constant", help="exact S_n for a norm pair")
    common(p, n_list=DEFAULT_N_LIST["stability-constant"])
    p.add_argument("--pair", default="inf-spijker", help="inf-inf or inf-spijker")
    p.add_argument("--dump-matrix", metavar="PREFIX", help="write dense A_N and B_N for the first n")
    p.set_defaults(func=cmd_stability_constant)

    p = sub.add_parser("witness", help="instability witness ratios")
    common(p, n_list=DEFAULT_N_LIST["witness"])
    p.add_argument("--construction", choices=("weak", "spijker"), default="weak")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("consistency", help="defect norms and observed order")
    common(p, n_list=DEFAULT_N_LIST["consistency"])
    p.add_argument("--scheme", help="catalog method name or alt-euler")
    p.add_argument("--norm", default="inf", help="inf or spijker")
    p.add_argument("--problem", default="growth", help=f"one of {sorted(PROBLEMS)}")
    p.set_defaults(func=cmd_consistency)

    p = sub.add_parser("integrate", help="run a method and print the trajectory")
    common(p)
    p.add_argument("--problem", default="decay", help=f"one of {sorted(PROBLEMS)}")
    p.add_argument("--n", type=int, default=100, help="interior levels")
    p.add_argument("--start", choices=("exact", "rk4"), default="exact")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("demo-oscillation", help="parasitic mode of a two-step method")
    common(p)
    p.set_defaults(T=10.0)
    p.add_argument("--problem", default="decay", help=f"one of {sorted(PROBLEMS)}")
    p.add_argument("--n", type=int, default=199, help="interior levels (N = n + 1)")
    p.add_argument("--perturbation", type=float, default=1e-3)
    p.set_defaults(func=cmd_demo_oscillation)

    p = sub.add_parser("reproduce", help="full evidence report as JSON")
    common(p, method=False, fmt=False)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"lmmstab {args.command}: error: {exc}\n")
        return 1
    except LmmError as exc:
        sys.stderr.write(f"lmmstab {args.command}: numerical failure: {exc}\n")
        return 2
    except (FloatingPointError, np.linalg.LinAlgError, OverflowError) as exc:
        sys.stderr.write(f"lmmstab {args.command}: numerical failure: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
