"""Replication grid for the lambda_sharp versus lambda_Liu comparison.

Every replication index ``r`` draws its graph, changed-edge permutation, X
sample and Y sample from four streams keyed by ``(base_seed, r, role, m)``.
Cells that differ only in ``d``, ``theta1_star`` or ``n_p`` therefore share
random numbers (common random numbers): the changed-edge sets are nested in
``d``, and the underlying normal draws are reused.
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass
import os
from pathlib import Path
import statistics
import time
from typing import Optional

import numpy as np

from ..errors import KliepError
from ..geometry import DEFAULT_TOL, HullKind, classify_hull, lambda_sharp
from ..simgen import (ROLE_EDGES, ROLE_GRAPH, ROLE_X, ROLE_Y,
                      build_graph, build_precision_pair, lambda_liu,
                      replication_rng, sample_gaussian)
from ..statmodel import StatisticMap, summarize_samples

RECORD_COLUMNS = ["replication", "m", "n_p", "n_q", "d", "theta1_star", "lambda_sharp",
                  "lambda_liu", "exceeds", "classification", "pd_shift", "wall_ms"]
SUMMARY_COLUMNS = ["m", "n_p", "n_q", "d", "theta1_star", "replications", "errors",
                   "median_lambda_sharp", "lambda_liu", "proportion_exceeds"]


@dataclass(frozen=True)
class ReplicationRecord:
    replication: int
    m: int
    n_p: int
    n_q: int
    d: int
    theta1_star: float
    lambda_sharp: Optional[float]
    lambda_liu: float
    exceeds: Optional[bool]
    classification: str
    pd_shift: float
    wall_ms: int

    @property
    def failed(self):
        return self.lambda_sharp is None

    def row(self):
        def num(x):
            return "" if x is None else repr(float(x))
        exceeds = "" if self.exceeds is None else str(self.exceeds).lower()
        return [str(self.replication), str(self.m), str(self.n_p), str(self.n_q),
                str(self.d), num(self.theta1_star), num(self.lambda_sharp),
                num(self.lambda_liu), exceeds, self.classification,
                num(self.pd_shift), str(self.wall_ms)]

    @classmethod
    def from_row(cls, row):
        def num(x):
            return None if x == "" else float(x)
        exceeds = None if row["exceeds"] == "" else row["exceeds"] == "true"
        return cls(int(row["replication"]), int(row["m"]), int(row["n_p"]),
                   int(row["n_q"]), int(row["d"]), float(row["theta1_star"]),
                   num(row["lambda_sharp"]), float(row["lambda_liu"]), exceeds,
                   row["classification"], float(row["pd_shift"]), int(row["wall_ms"]))


def grid_cells(config):
    """Cells in output order: m, then n_p, then d, then theta1_star."""
    for m in config.m_list:
        for ratio in config.np_over_logm_list:
            for d in config.d_list:
                for t1s in config.theta1_star:
                    yield m, config.n_p(m, ratio), d, t1s


def run_replication(config, m, n_p, d, theta1_star, r):
    start = time.perf_counter()
    liu = lambda_liu(m, n_p)
    shift = 0.0
    try:
        streams = {role: replication_rng(config.base_seed, r, role, m)
                   for role in (ROLE_GRAPH, ROLE_EDGES, ROLE_X, ROLE_Y)}
        edges = build_graph(config.graph_spec(m), rng=streams[ROLE_GRAPH])
        pair = build_precision_pair(
            m, edges, d, config.theta0, config.theta1, theta1_star,
            pd_policy=config.pd_policy, rng=streams[ROLE_EDGES],
            edge_coeff_mode=config.edge_coeff_mode)
        shift = pair.pd_shift
        X = sample_gaussian(pair.theta_p, n_p, streams[ROLE_X])
        Y = sample_gaussian(pair.theta_q, config.n_q, streams[ROLE_Y])
        s = summarize_samples(StatisticMap.gaussian_pairwise(m), X, Y)
        ls = lambda_sharp(s, config.dual_norm).value
        kind = HullKind.OUTSIDE if ls > DEFAULT_TOL else classify_hull(s).kind
        classification, exceeds = kind.value, ls > liu
    except (KliepError, np.linalg.LinAlgError) as exc:
        ls, exceeds, classification = None, None, f"error:{type(exc).__name__}"
    wall = int(round(1000 * (time.perf_counter() - start))) if config.record_wall_ms else 0
    return ReplicationRecord(r, m, n_p, config.n_q, d, float(theta1_star), ls, liu,
                             exceeds, classification, shift, wall)


def resolve_threads(threads=None):
    env = os.environ.get("KLIEPKIT_THREADS")
    if env:
        threads = int(env)
    return max(1, int(threads or 1))


def run_experiment(config, out_dir=None, threads=None):
    """Run every (cell, replication) and write ``records.csv``/``summary.csv``.

    Records come back in (cell, replication) order whatever the thread
    count. Failed replications become error rows (empty lambda_sharp,
    classification ``error:<ExceptionName>``).
    """
    tasks = [(m, n_p, d, t1s, r)
             for m, n_p, d, t1s in grid_cells(config)
             for r in range(config.replications)]
    n_threads = resolve_threads(threads)
    if n_threads == 1:
        records = [run_replication(config, *t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            records = list(pool.map(lambda t: run_replication(config, *t), tasks))
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_records(records, out / "records.csv")
        write_summary(summarize_records(records), out / "summary.csv")
    return records


def write_records(records, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for rec in records:
            w.writerow(rec.row())


def read_records(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RECORD_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        return [ReplicationRecord.from_row(row) for row in reader]


def summarize_records(records):
    """Per-cell aggregates: median lambda_sharp and exceed proportion."""
    cells = {}
    for rec in records:
        cells.setdefault((rec.m, rec.n_p, rec.n_q, rec.d, rec.theta1_star), []).append(rec)
    rows = []
    for (m, n_p, n_q, d, t1s), recs in cells.items():
        ok = [r for r in recs if not r.failed]
        values = [r.lambda_sharp for r in ok]
        rows.append({
            "m": m, "n_p": n_p, "n_q": n_q, "d": d, "theta1_star": t1s,
            "replications": len(recs), "errors": len(recs) - len(ok),
            "median_lambda_sharp": statistics.median(values) if values else None,
            "lambda_liu": recs[0].lambda_liu,
            "proportion_exceeds": (sum(r.exceeds for r in ok) / len(ok)) if ok else None,
        })
    return rows


def write_summary(rows, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for row in rows:
            w.writerow(["" if row[c] is None else
                        (repr(row[c]) if isinstance(row[c], float) else str(row[c]))
                        for c in SUMMARY_COLUMNS])
