"""``kliepkit`` command line.

Exit codes: 0 success, 2 configuration or input error, 3 numerical or solver
error, 4 I/O error.
"""

import argparse
import json
import sys

import numpy as np

from ..errors import ConfigError, KliepError, NotPositiveDefinite, NumericalError, SolverError
from ..geometry import DEFAULT_TOL, DualNorm, classify_hull, lambda_sharp
from ..losscore import PenaltySpec
from ..solvers import SolveOptions, existence_report, fit_penalized
from ..statmodel import StatisticMap, apply_statistic, summarize
from .config import load_config
from .experiment import read_records, run_experiment, summarize_records
from .plot import emit_summary_plot
from .toy import toy_profile

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _load_matrix(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return np.loadtxt(text.splitlines(), delimiter="," if "," in text else None, ndmin=2)


def _stat_map(name, m):
    if name in ("gaussian", "gaussian_pairwise"):
        return StatisticMap.gaussian_pairwise(m)
    if name == "identity":
        return StatisticMap.identity(m)
    raise ConfigError(f"unknown statistic {name!r}")


def _summary_from_args(args):
    if args.tx or args.ty:
        if not (args.tx and args.ty):
            raise ConfigError("--tx and --ty go together")
        return summarize(_load_matrix(args.tx), _load_matrix(args.ty))
    if args.x or args.y:
        if not (args.x and args.y):
            raise ConfigError("--x and --y go together")
        X, Y = _load_matrix(args.x), _load_matrix(args.y)
        smap = _stat_map(args.statistic, X.shape[1])
        return summarize(apply_statistic(smap, X), apply_statistic(smap, Y))
    try:
        doc = json.load(sys.stdin)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"stdin is not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ConfigError("stdin JSON must be an object")
    if "tx" in doc and "ty" in doc:
        return summarize(np.asarray(doc["tx"], float), np.asarray(doc["ty"], float))
    if "x" in doc and "y" in doc:
        X = np.atleast_2d(np.asarray(doc["x"], float))
        Y = np.atleast_2d(np.asarray(doc["y"], float))
        smap = _stat_map(doc.get("statistic", args.statistic), X.shape[1])
        return summarize(apply_statistic(smap, X), apply_statistic(smap, Y))
    raise ConfigError("stdin JSON needs keys tx/ty or x/y")


def _penalty_from_args(args):
    kind = args.penalty
    if kind == "none":
        return PenaltySpec.none()
    if kind == "l1":
        return PenaltySpec.l1(args.lam)
    if kind == "l2":
        return PenaltySpec.l2(args.lam)
    return PenaltySpec.elastic_net(args.lam1, args.lam2)


def _vec(a):
    return None if a is None else np.asarray(a, dtype=float).tolist()


def _emit(doc):
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_diagnose(args):
    s = _summary_from_args(args)
    hull = classify_hull(s, tol=args.tol)
    dist = lambda_sharp(s, DualNorm(args.dual_norm))
    doc = {
        "n_y": s.n_y,
        "k": s.k,
        "classification": hull.kind.value,
        "lp_value": hull.lp_value,
        "weights": _vec(hull.weights),
        "separator": _vec(hull.separator),
        "margin": hull.margin,
        "lambda_sharp": {
            "value": dist.value,
            "dual_norm": dist.dual_norm.value,
            "nearest_point": _vec(dist.nearest_point),
            "direction": _vec(dist.direction),
        },
    }
    if args.penalty != "none":
        rep = existence_report(s, _penalty_from_args(args), tol=args.tol)
        doc["verdict"] = rep.verdict.value
        doc["explanation"] = rep.explanation
    _emit(doc)
    return EXIT_OK


def cmd_fit(args):
    s = _summary_from_args(args)
    p = _penalty_from_args(args)
    opts = SolveOptions(max_iters=args.max_iters, grad_tol=args.grad_tol,
                        accelerate=args.accelerate)
    res = fit_penalized(s, p, opts)
    rep = existence_report(s, p, tol=args.tol)
    _emit({
        "status": res.status.value,
        "delta_hat": _vec(res.delta_hat),
        "objective": res.objective,
        "iterations": res.iterations,
        "residual": res.residual,
        "certificate": _vec(res.certificate),
        "verdict": rep.verdict.value,
        "explanation": rep.explanation,
    })
    return EXIT_OK


def cmd_toy(args):
    try:
        points = [float(v) for v in args.points.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--points must be comma-separated numbers, got {args.points!r}") from None
    if not points:
        raise ConfigError("--points is empty")
    if not args.grid_step > 0 or args.grid_max < args.grid_min:
        raise ConfigError("need grid-step > 0 and grid-max >= grid-min")
    count = int(np.floor((args.grid_max - args.grid_min) / args.grid_step + 1e-9)) + 1
    grid = args.grid_min + args.grid_step * np.arange(count)
    _, losses, kind, dist = toy_profile(points, args.tbar, grid, args.out)
    _emit({"classification": kind.value, "lambda_sharp": dist, "points": len(grid),
           "min_loss": float(losses.min()), "out": args.out})
    return EXIT_OK


def cmd_experiment(args):
    config = load_config(args.config)
    records = run_experiment(config, args.out, threads=args.threads)
    failed = sum(r.failed for r in records)
    _emit({"records": len(records), "failed": failed, "cells": len(summarize_records(records)),
           "out": args.out})
    return EXIT_OK


def cmd_plot(args):
    records = read_records(args.records)
    emit_summary_plot(records, args.out)
    return EXIT_OK


def _add_inputs(p):
    p.add_argument("--tx", help="X-sample statistics (text matrix, one row per observation)")
    p.add_argument("--ty", help="Y-sample statistics (text matrix)")
    p.add_argument("--x", help="raw X observations (text matrix)")
    p.add_argument("--y", help="raw Y observations (text matrix)")
    p.add_argument("--statistic", default="gaussian",
                   choices=["gaussian", "gaussian_pairwise", "identity"])
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--penalty", default="none", choices=["none", "l1", "l2", "enet"])
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--lam1", type=float, default=0.0)
    p.add_argument("--lam2", type=float, default=0.05)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kliepkit", description="KLIEP existence diagnostics and estimators")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagnose", help="hull classification and lambda_sharp as JSON; "
                       "reads JSON from stdin when no input files are given")
    _add_inputs(p)
    p.add_argument("--dual-norm", default="Linf", choices=["Linf", "L2"])
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("fit", help="fit the (penalized) KLIEP estimator")
    _add_inputs(p)
    p.add_argument("--max-iters", type=int, default=10000)
    p.add_argument("--grad-tol", type=float, default=1e-8)
    p.add_argument("--accelerate", action="store_true")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("toy", help="1-D loss profile for a set of statistic values")
    p.add_argument("--points", required=True,
                   help="comma-separated Y statistics, e.g. --points=-1,0,1,2 "
                   "(the = keeps a leading minus from reading as a flag)")
    p.add_argument("--tbar", type=float, required=True)
    p.add_argument("--grid-min", type=float, default=-5.0)
    p.add_argument("--grid-max", type=float, default=5.0)
    p.add_argument("--grid-step", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_toy)

    p = sub.add_parser("experiment", help="run a replication grid from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads (KLIEPKIT_THREADS overrides)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("plot", help="SVG boxplots from records.csv")
    p.add_argument("--records", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NumericalError, SolverError, NotPositiveDefinite) as exc:
        print(f"kliepkit: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, KliepError, ValueError) as exc:
        print(f"kliepkit: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"kliepkit: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
