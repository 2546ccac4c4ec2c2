"""Acceptance criteria, one test each, printing a PASS/FAIL line per criterion.

Criteria 10 and 11 share one pair of desk-scale runs (two to five minutes
each on a single core) and carry the ``slow`` marker; deselect them with
``-m "not slow"``.
"""

import itertools
import math
import time

import numpy as np
import pytest

from kliepkit.geometry import HullKind, classify_hull, lambda_sharp, minimax_bruteforce
from kliepkit.harness.config import parse_config
from kliepkit.harness.experiment import run_experiment, summarize_records
from kliepkit.losscore import PenaltySpec, kliep_gradient, kliep_loss, softmax_weights
from kliepkit.solvers import FitStatus, Verdict, existence_report, fit_kliep, fit_penalized
from kliepkit.statmodel import SufficientSummary

from conftest import inside_summary, random_summary, toy
from oracles import hull_membership_2d, random_2d_instance


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_criterion_01_toy_trichotomy(report):
    start = time.perf_counter()
    kinds = [classify_hull(toy(t), tol=1e-8).kind for t in (1, 2, 3)]
    elapsed = time.perf_counter() - start
    expected = [HullKind.REL_INTERIOR, HullKind.REL_BOUNDARY, HullKind.OUTSIDE]
    report(1, kinds == expected and elapsed < 1.0,
           f"kinds={[k.value for k in kinds]} runtime={elapsed:.3f}s")


def test_criterion_02_toy_threshold(report):
    values = {(t, n): lambda_sharp(toy(t), n).value for t in (1, 2, 3) for n in ("Linf", "L2")}
    ok = all(abs(values[3, n] - 1.0) <= 1e-9 for n in ("Linf", "L2"))
    ok = ok and all(values[t, n] <= 1e-8 for t in (1, 2) for n in ("Linf", "L2"))
    report(2, ok, " ".join(f"{t}/{n}={v:.3g}" for (t, n), v in values.items()))


def test_criterion_03_penalized_trichotomy(report):
    s = toy(3)
    above = fit_penalized(s, PenaltySpec.l1(1.5)).status
    below = fit_penalized(s, PenaltySpec.l1(0.5)).status
    expected = {0.5: Verdict.UNBOUNDED, 1.0: Verdict.BOUNDED_BELOW_BOUNDARY_CASE,
                1.5: Verdict.MINIMUM_EXISTS}
    verdicts = {lam: existence_report(s, PenaltySpec.l1(lam), tol=1e-6).verdict
                for lam in expected}
    ok = (above is FitStatus.CONVERGED and below is FitStatus.UNBOUNDED_DETECTED
          and verdicts == expected)
    report(3, ok, f"fit(1.5)={above.value} fit(0.5)={below.value} "
           + " ".join(f"{lam}:{v.value}" for lam, v in verdicts.items()))


def test_criterion_04_gradient(report):
    rng = np.random.default_rng(4)
    h, worst = 1e-5, 0.0
    for _ in range(100):
        k, n = int(rng.integers(1, 11)), int(rng.integers(1, 51))
        s = random_summary(rng, k, n)
        d = rng.uniform(-5, 5, k)
        g = kliep_gradient(s, d)
        fd = np.array([(kliep_loss(s, d + h * e) - kliep_loss(s, d - h * e)) / (2 * h)
                       for e in np.eye(k)])
        worst = max(worst, np.abs(fd - g).max() / np.abs(g).max())
    report(4, worst <= 1e-6, f"worst relative error {worst:.2e} over 100 instances")


def test_criterion_05_geometry_oracle(report):
    rng = np.random.default_rng(5)
    agree, worst = 0, 0.0
    for _ in range(200):
        pts, p = random_2d_instance(rng)
        s = SufficientSummary.from_parts(p, pts)
        agree += classify_hull(s).kind.value == hull_membership_2d(pts, p)
        for norm in ("Linf", "L2"):
            gap = abs(lambda_sharp(s, norm).value - minimax_bruteforce(s, norm, 20000))
            worst = max(worst, gap)
    report(5, agree == 200 and worst <= 1e-3,
           f"agreement {agree}/200, worst |lambda_sharp - minimax| {worst:.2e}")


def test_criterion_06_stationarity(report):
    rng = np.random.default_rng(6)
    converged, worst = 0, 0.0
    for i in range(100):
        k, n = int(rng.integers(1, 7)), int(rng.integers(2, 30))
        s = inside_summary(rng, k, n) if i % 2 else random_summary(rng, k, n)
        res = fit_kliep(s)
        if res.status is FitStatus.CONVERGED:
            converged += 1
            alpha = softmax_weights(s, res.delta_hat)
            worst = max(worst, np.abs(alpha @ s.ty - s.tbar_x).max())
    report(6, converged > 0 and worst <= 1e-6,
           f"{converged} converged fits, worst moment gap {worst:.2e}")


def test_criterion_07_bounded_below(report):
    rng = np.random.default_rng(7)
    tested, worst = 0, math.inf
    while tested < 40:
        k, n = int(rng.integers(1, 6)), int(rng.integers(1, 20))
        s = inside_summary(rng, k, n, boundary=bool(tested % 2))
        if classify_hull(s).kind is HullKind.OUTSIDE:
            continue
        tested += 1
        dirs = rng.uniform(-1, 1, (1000, k))
        dirs /= np.abs(dirs).max(axis=1, keepdims=True)
        probes = dirs * rng.uniform(0, 100, (1000, 1))
        floor = -math.log(s.n_y)
        margin = min(kliep_loss(s, d) - floor for d in probes)
        worst = min(worst, margin)
    report(7, worst >= -1e-9,
           f"40 inside instances x 1000 probes, min loss + log n_y = {worst:.2e}")


def test_criterion_08_orthogonal_invariance(report):
    rng = np.random.default_rng(8)
    worst, count = 0.0, 0
    for _ in range(50):
        k = int(rng.integers(3, 9))
        r = int(rng.integers(1, k))
        basis = np.linalg.qr(rng.standard_normal((k, k)))[0]
        span, perp = basis[:, :r], basis[:, r:]
        ty = rng.standard_normal((int(rng.integers(2, 15)), r)) @ span.T
        s = SufficientSummary.from_parts(ty[0] + 0.3 * rng.standard_normal(r) @ span.T, ty)
        assert np.linalg.matrix_rank(s.u) < k
        for _ in range(20):
            d = rng.uniform(-5, 5, k)
            v = perp @ rng.standard_normal(k - r) * rng.uniform(0, 50)
            worst = max(worst, abs(kliep_loss(s, d + v) - kliep_loss(s, d)))
            count += 1
    report(8, worst <= 1e-10, f"{count} perturbations, worst loss change {worst:.2e}")


def test_criterion_09_elastic_net_totality(report):
    rng = np.random.default_rng(9)
    statuses, worst_iters = [], 0
    while len(statuses) < 100:
        k, n = int(rng.integers(1, 8)), int(rng.integers(1, 30))
        s = random_summary(rng, k, n)
        if classify_hull(s).kind is not HullKind.OUTSIDE:
            continue
        res = fit_penalized(s, PenaltySpec.elastic_net(0.1, 0.05))
        statuses.append(res.status)
        worst_iters = max(worst_iters, res.iterations)
    ok = all(st is FitStatus.CONVERGED for st in statuses) and worst_iters <= 10000
    report(9, ok, f"{statuses.count(FitStatus.CONVERGED)}/100 converged, "
           f"max iterations {worst_iters}")


DESK = {"graph": "lattice", "m_list": [36], "np_over_logm_list": [50, 200], "n_q": 200,
        "d_list": [2, 4, 8], "theta0": 2, "theta1": 0.4, "theta1_star": [-0.4, -0.8],
        "replications": 30, "base_seed": 20240611, "pd_policy": "strict",
        "dual_norm": "Linf", "edge_coeff_mode": "half"}


@pytest.fixture(scope="module")
def desk_runs(tmp_path_factory):
    config = parse_config(DESK)
    runs = []
    for name in ("first", "second"):
        out = tmp_path_factory.mktemp(name)
        start = time.perf_counter()
        records = run_experiment(config, out)
        runs.append((out, records, time.perf_counter() - start))
    return runs


@pytest.mark.slow
def test_criterion_10_desk_trends(report, desk_runs):
    _, records, elapsed = desk_runs[0]
    rows = summarize_records(records)
    med = {(r["n_p"], r["d"], r["theta1_star"]): r["median_lambda_sharp"] for r in rows}
    n_ps = sorted({key[0] for key in med})
    errors = sum(r["errors"] for r in rows)
    in_d = all(med[n_p, a, t] <= med[n_p, b, t]
               for n_p in n_ps for t in (-0.4, -0.8) for a, b in itertools.pairwise((2, 4, 8)))
    in_theta = all(med[n_p, d, -0.4] <= med[n_p, d, -0.8] for n_p in n_ps for d in (2, 4, 8))
    table = " ".join(f"[n_p={k[0]} d={k[1]} t*={k[2]}]={v:.4f}" for k, v in sorted(med.items()))
    report(10, errors == 0 and in_d and in_theta and elapsed <= 600,
           f"monotone in d: {in_d}, in |theta1*|: {in_theta}, errors {errors}, "
           f"runtime {elapsed:.0f}s; medians {table}")


@pytest.mark.slow
def test_criterion_11_determinism(report, desk_runs):
    (first, _, _), (second, _, _) = desk_runs
    a = (first / "records.csv").read_bytes()
    b = (second / "records.csv").read_bytes()
    report(11, a == b, f"records.csv byte-identical across two runs ({len(a)} bytes)")
