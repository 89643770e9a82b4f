"""Command line interface: ``python -m pottssos <command> ...``.

Commands: classify, scan, thresholds, verify, sample.  Exit codes are 0 on
success, 1 on usage errors and 2 when a numerical verification fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import chain, extremality, treeops
from .model import Couplings, DomainError, ModelParams
from .tisgm import LINES, enumerate_tisgm, line_point, multistart_fixed_points, table_count

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2
VERIFY_TOL = 1e-10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(v: float) -> str:
    return f"{v:.12g}"


def _num(v):
    """Floats rounded to 12 significant digits, recursively."""
    if isinstance(v, (float, np.floating)):
        return float(fmt(float(v)))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, complex):
        return {"re": _num(v.real), "im": _num(v.imag)}
    if isinstance(v, dict):
        return {k: _num(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_num(x) for x in v]
    return v


def dump_json(doc) -> str:
    return json.dumps(_num(doc), indent=2, sort_keys=False) + "\n"


def _params(args) -> ModelParams:
    if args.theta is not None or args.r is not None:
        if args.theta is None or args.r is None:
            raise UsageError("give both --theta and --r")
        theta, r = args.theta, args.r
    elif args.J is not None and args.Jp is not None:
        c = Couplings(args.J, args.Jp, args.beta)
        return ModelParams.from_couplings(c, k=args.k, m=args.m)
    else:
        raise UsageError("give --theta and --r, or --J, --Jp (and optionally --beta)")
    if not (theta > 0 and r > 0):
        raise UsageError("--theta and --r must be positive")
    return ModelParams(theta, r, args.k, args.m)


# ---------------------------------------------------------------- classify

def classify_document(theta: float, r: float, tol: float = 1e-8) -> dict:
    res = enumerate_tisgm(theta, r)
    pts = []
    for i, fp in enumerate(res.fixed_points):
        kern = chain.build_kernel(fp, theta, r)
        sp = chain.spectrum(kern)
        v = extremality.extremality_verdict(fp, theta, r, 2, i + 1)
        pts.append({
            "index": i + 1, "x": fp.x, "y": fp.y, "h": list(fp.h), "branch": fp.branch,
            "residual": fp.residual, "Z": kern.Z, "kernel": kern.P.tolist(),
            "lambda1": sp.lambda1, "lambda2": sp.lambda2, "Dstar": sp.Dstar,
            "lambda_max": v.lambda_max, "eta": v.eta, "kappa": v.kappa, "gamma": v.gamma,
            "two_kappa_gamma": v.two_kappa_gamma, "status": v.status, "heuristic": v.heuristic,
        })
    return {
        "params": {"theta": theta, "r": r, "k": 2, "m": 2},
        "N": res.N,
        "region": {"a_region": res.region.a_region, "b_region": res.region.b_region,
                   "table_N": table_count(res.region.a_region, res.region.b_region)},
        "boundary": res.boundary,
        "boundary_reasons": list(res.region.boundary),
        "residual_tol": tol,
        "residuals_ok": all(fp.residual <= tol for fp in res.fixed_points),
        "fixed_points": pts,
    }


def cmd_classify(args, out) -> int:
    p = _params(args)
    if (p.k, p.m) == (2, 2):
        doc = classify_document(p.theta, p.r, args.tol)
        out.write(dump_json(doc))
        return EXIT_OK if doc["residuals_ok"] else EXIT_VERIFY
    laws = multistart_fixed_points(p, seed=args.seed)
    laws.sort(key=lambda h: tuple(h))
    out.write(dump_json({"params": {"theta": p.theta, "r": p.r, "k": p.k, "m": p.m},
                         "method": "multistart-newton", "N": len(laws),
                         "boundary_laws": [list(h) for h in laws]}))
    return EXIT_OK


# -------------------------------------------------------------------- scan

SCAN_HEADER = ["theta", "r", "N", "a_region", "b_region", "n_extreme", "n_nonextreme",
               "n_undetermined", "boundary_flag"]


def scan_row(point: tuple[float, float]) -> list[str]:
    theta, r = point
    res = enumerate_tisgm(theta, r)
    status = [extremality.extremality_verdict(fp, theta, r, 2, i + 1).status
              for i, fp in enumerate(res.fixed_points)]
    return [fmt(theta), fmt(r), str(res.N), res.region.a_region, res.region.b_region,
            str(status.count(extremality.EXTREME)), str(status.count(extremality.NON_EXTREME)),
            str(status.count(extremality.UNDETERMINED)), str(int(res.boundary))]


def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if not (lo > 0 and lo < hi and steps >= 1):
        raise UsageError(f"bad range {lo} {hi} {steps}: need 0 < lo < hi and steps >= 1")
    return np.linspace(lo, hi, int(steps))


def scan_points(args) -> list[tuple[float, float]]:
    if args.line:
        if not args.range:
            raise UsageError("--line needs --range LO HI STEPS")
        return [line_point(args.line, v) for v in _grid(*args.range)]
    if not (args.theta_range and args.r_range):
        raise UsageError("give --theta-range and --r-range, or --line with --range")
    thetas, rs = _grid(*args.theta_range), _grid(*args.r_range)
    return [(float(t), float(r)) for t in thetas for r in rs]


def scan_csv(points, jobs: int = 1) -> str:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(scan_row, points, chunksize=16))
    else:
        rows = [scan_row(p) for p in points]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, path, out):
    if path in (None, "-"):
        out.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc}") from None


def cmd_scan(args, out) -> int:
    _emit(scan_csv(scan_points(args), args.jobs), args.out, out)
    return EXIT_OK


# -------------------------------------------------------------- thresholds

def cmd_thresholds(args, out) -> int:
    names = extremality.THRESHOLD_NAMES if args.which == "all" else [args.which]
    try:
        reps = [extremality.find_threshold(n, args.tol) for n in names]
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    docs = [{"name": t.name, "value": t.value, "bracket": list(t.bracket), "tol": t.tol,
             "defining_function": t.defining_function} for t in reps]
    out.write(dump_json(docs if args.which == "all" else docs[0]))
    return EXIT_OK


# ------------------------------------------------------------------ verify

def verify_report(params: ModelParams, depth: int, trials: int, seed: int = 0,
                  field_scale: float = 3.0) -> dict:
    tree = treeops.build_tree(params.k, depth)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        h = rng.uniform(-field_scale, field_scale, size=(len(tree.leaves), params.m))
        a = treeops.exact_root_marginal(tree, params, h)
        b = treeops.recursion_root_marginal(tree, params, h)
        worst = max(worst, float(np.max(np.abs(a - b))))
    return {"theta": params.theta, "r": params.r, "k": params.k, "m": params.m, "depth": depth,
            "trials": trials, "seed": seed, "max_deviation": worst, "tol": VERIFY_TOL,
            "pass": worst <= VERIFY_TOL}


def cmd_verify(args, out) -> int:
    p = _params(args)
    try:
        rep = verify_report(p, args.depth, args.trials, args.seed)
    except treeops.SizeCapError as exc:
        raise UsageError(str(exc)) from None
    out.write(dump_json(rep))
    return EXIT_OK if rep["pass"] else EXIT_VERIFY


# ------------------------------------------------------------------ sample

def sample_csv(theta: float, r: float, index: int, depth: int, n: int, seed: int) -> str:
    res = enumerate_tisgm(theta, r)
    if not 1 <= index <= res.N:
        raise UsageError(f"measure index {index} invalid: {res.N} measure(s) at theta={theta}, r={r}")
    kern = chain.build_kernel(res.fixed_points[index - 1], theta, r)
    nu = chain.stationary_law(kern)
    stats = treeops.sample_chain(treeops.build_tree(2, depth), kern, nu, seed, n)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["generation", "vertices", "spin", "count", "frequency", "stationary"])
    for g, (counts, size) in enumerate(zip(stats.generation_counts, stats.generation_sizes)):
        tot = n * size
        for s in range(len(nu)):
            w.writerow([g, size, s, int(counts[s]), fmt(counts[s] / tot), fmt(nu[s])])
    return buf.getvalue()


def cmd_sample(args, out) -> int:
    p = _params(args)
    if args.n < 1 or args.depth < 0:
        raise UsageError("need --n >= 1 and --depth >= 0")
    _emit(sample_csv(p.theta, p.r, args.measure, args.depth, args.n, args.seed), args.out, out)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def _add_params(p):
    p.add_argument("--theta", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--J", type=float)
    p.add_argument("--Jp", type=float)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--m", type=int, default=2)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pottssos", description="TISGMs of the Potts-SOS model on the Cayley tree of order 2")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="enumerate the measures at one (theta, r) and judge extremality")
    _add_params(p)
    p.add_argument("--seed", type=int, default=0, help="multistart seed when (k, m) != (2, 2)")
    p.add_argument("--tol", type=float, default=1e-8, help="re-substitution tolerance; exit 2 if exceeded")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan", help="CSV over a grid or along a special line")
    p.add_argument("--theta-range", type=float, nargs=3, metavar=("LO", "HI", "STEPS"))
    p.add_argument("--r-range", type=float, nargs=3, metavar=("LO", "HI", "STEPS"))
    p.add_argument("--line", choices=LINES)
    p.add_argument("--range", type=float, nargs=3, metavar=("LO", "HI", "STEPS"))
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("thresholds", help="locate threshold constants by bisection")
    p.add_argument("--which", default="all")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("verify", help="exact finite-volume marginal vs boundary-law recursion")
    _add_params(p)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="sample the tree-indexed Markov chain of one measure")
    _add_params(p)
    p.add_argument("--measure", type=int, default=1, help="1-based measure index")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sample)
    return ap


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, DomainError) as exc:
        print(f"pottssos {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
