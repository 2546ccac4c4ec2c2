import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kliepkit.errors import SolverError, UnsupportedDimensionError
from kliepkit.geometry import (DualNorm, HullKind, classify_hull, lambda_sharp,
                               minimax_bruteforce, sphere_grid)
from kliepkit.kernels import sphere_grid_minmax
from kliepkit.statmodel import SufficientSummary

from conftest import inside_summary, random_summary, square, toy
from oracles import hull_membership_2d, random_2d_instance


def check_witnesses(s, h, tol=1e-8):
    if h.kind is HullKind.REL_INTERIOR:
        assert h.weights is not None and h.weights.min() >= h.lp_value > tol
    if h.kind in (HullKind.REL_INTERIOR, HullKind.REL_BOUNDARY):
        w = h.weights
        assert abs(w.sum() - 1) <= 1e-9
        np.testing.assert_allclose(w @ s.ty, s.tbar_x, atol=1e-7)
    if h.kind is HullKind.REL_BOUNDARY:
        assert w.min() >= -1e-9 and abs(h.lp_value) <= tol
    if h.kind is HullKind.OUTSIDE:
        d = h.separator
        assert d is not None
        margin = d @ s.tbar_x - (s.ty @ d).max()
        assert margin > 0
        assert margin == pytest.approx(h.margin, abs=1e-9)


def check_lambda(s, res):
    gap = s.tbar_x - res.nearest_point
    norm = np.abs(gap).max() if res.dual_norm is DualNorm.LINF else np.linalg.norm(gap)
    assert abs(norm - res.value) <= 1e-9
    assert res.hull_weights.min() >= 0 and abs(res.hull_weights.sum() - 1) <= 1e-12
    np.testing.assert_allclose(res.hull_weights @ s.ty, res.nearest_point, atol=1e-9)
    if res.direction is not None:
        unit = (np.abs(res.direction).sum() if res.dual_norm is DualNorm.LINF
                else np.linalg.norm(res.direction))
        assert unit == pytest.approx(1.0, abs=1e-12)
        assert (s.u @ res.direction).max() == pytest.approx(-res.value, abs=1e-7)


@pytest.mark.parametrize("tbar,kind", [(1, HullKind.REL_INTERIOR),
                                       (2, HullKind.REL_BOUNDARY),
                                       (3, HullKind.OUTSIDE)])
def test_toy_trichotomy(tbar, kind):
    h = classify_hull(toy(tbar))
    assert h.kind is kind
    check_witnesses(toy(tbar), h)


def test_unit_square_center():
    h = classify_hull(square([0.5, 0.5]))
    assert h.kind is HullKind.REL_INTERIOR
    # uniform weights reproduce the center
    np.testing.assert_allclose(np.full(4, 0.25) @ square([0.5, 0.5]).ty, [0.5, 0.5])
    check_witnesses(square([0.5, 0.5]), h)


def test_unit_square_outside_separator():
    h = classify_hull(square([2.0, 0.0]))
    assert h.kind is HullKind.OUTSIDE
    np.testing.assert_allclose(h.separator, [1.0, 0.0], atol=1e-9)
    assert h.margin == pytest.approx(1.0, abs=1e-12)


def test_singleton_hull():
    s = SufficientSummary.from_parts([1.0, -2.0], [[1.0, -2.0]])
    assert classify_hull(s).kind is HullKind.REL_INTERIOR
    assert lambda_sharp(s, "L2").value == 0.0


@pytest.mark.parametrize("norm", ["Linf", "L2"])
def test_toy_lambda_sharp(norm):
    res = lambda_sharp(toy(3), norm)
    assert res.value == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(res.nearest_point, [2.0], atol=1e-9)
    np.testing.assert_allclose(res.direction, [1.0])
    check_lambda(toy(3), res)
    for t in (1, 2):
        assert lambda_sharp(toy(t), norm).value <= 1e-8


def test_square_linf_distance():
    s = square([2.0, 0.5])
    res = lambda_sharp(s, "Linf")
    assert res.value == pytest.approx(1.0, abs=1e-9)
    # nearest point is not unique in l-inf; (1, 0.5) is one of them
    assert np.abs(s.tbar_x - np.array([1.0, 0.5])).max() == pytest.approx(res.value)
    check_lambda(s, res)
    # brute-force grid over the square
    g = np.linspace(0, 1, 401)
    xx, yy = np.meshgrid(g, g)
    brute = np.maximum(np.abs(2.0 - xx), np.abs(0.5 - yy)).min()
    assert res.value == pytest.approx(brute, abs=1e-12)


def test_minimax_toy_exact():
    assert minimax_bruteforce(toy(3), "Linf", 100) == 1.0
    assert minimax_bruteforce(toy(3), "L2", 100) == 1.0
    assert minimax_bruteforce(toy(1), "Linf", 100) == 0.0


def test_minimax_errors(rng):
    with pytest.raises(UnsupportedDimensionError):
        minimax_bruteforce(random_summary(rng, 4, 5), "Linf", 1000)
    with pytest.raises(ValueError):
        minimax_bruteforce(toy(3), "Linf", 10)


def test_sphere_grid_norms():
    for k in (2, 3):
        np.testing.assert_allclose(np.abs(sphere_grid(k, 500, "Linf")).sum(1), 1.0)
        np.testing.assert_allclose(np.linalg.norm(sphere_grid(k, 500, "L2"), axis=1), 1.0)


@pytest.mark.parametrize("norm", ["Linf", "L2"])
def test_minimax_resolution_bound(rng, norm):
    grid_n = 2000
    for _ in range(30):
        s = random_summary(rng, 2, int(rng.integers(2, 10)))
        gap = abs(minimax_bruteforce(s, norm, grid_n) - lambda_sharp(s, norm).value)
        assert gap <= 2 * math.pi / grid_n * np.linalg.norm(s.u, axis=1).max()


def test_minimax_three_dimensional(rng):
    for _ in range(10):
        s = random_summary(rng, 3, 8)
        for norm in ("Linf", "L2"):
            exact = lambda_sharp(s, norm).value
            approx = minimax_bruteforce(s, norm, 40000)
            # grid can only under-estimate the max-min
            assert approx <= exact + 1e-9
            assert exact - approx <= 0.05 * np.linalg.norm(s.u, axis=1).max()


def test_oracle_agreement(rng):
    for _ in range(100):
        pts, p = random_2d_instance(rng)
        s = SufficientSummary.from_parts(p, pts)
        assert classify_hull(s).kind.value == hull_membership_2d(pts, p)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), k=st.integers(1, 6), n=st.integers(1, 15),
       mode=st.sampled_from(["random", "inside", "vertex"]))
def test_trichotomy_and_consistency(seed, k, n, mode):
    rng = np.random.default_rng(seed)
    if mode == "random":
        s = random_summary(rng, k, n)
    else:
        s = inside_summary(rng, k, n, boundary=mode == "vertex")
    h = classify_hull(s)
    assert h.kind in tuple(HullKind)
    check_witnesses(s, h)
    for norm in ("Linf", "L2"):
        res = lambda_sharp(s, norm, max_iter=200 * n + 2000)
        check_lambda(s, res)
        if h.kind is HullKind.OUTSIDE:
            assert res.value > 1e-8
        else:
            assert res.value <= 1e-8


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), gamma=st.floats(0.1, 20.0))
def test_translation_and_scale(seed, gamma):
    rng = np.random.default_rng(seed)
    s = random_summary(rng, 3, 7)
    c = 10 * rng.standard_normal(3)
    shifted = SufficientSummary.from_parts(s.tbar_x + c, s.ty + c)
    scaled = SufficientSummary.from_parts(gamma * s.tbar_x, gamma * s.ty)
    base_kind = classify_hull(s).kind
    assert classify_hull(shifted).kind is base_kind
    assert classify_hull(scaled).kind is base_kind
    for norm in ("Linf", "L2"):
        base = lambda_sharp(s, norm).value
        assert lambda_sharp(shifted, norm).value == pytest.approx(base, abs=1e-8)
        assert lambda_sharp(scaled, norm).value == pytest.approx(gamma * base, rel=1e-7, abs=1e-8)


def test_relint_grid_minimum_positive(rng):
    """On the unit sphere of span{u_j}, max_j D.u_j stays positive in the relative interior."""
    checked = 0
    for _ in range(60):
        k = int(rng.integers(1, 4))
        s = inside_summary(rng, k, int(rng.integers(2, 9)))
        if classify_hull(s).kind is not HullKind.REL_INTERIOR:
            continue
        _, sv, vt = np.linalg.svd(s.u)
        rank = int((sv > 1e-10).sum())
        if rank == 0:
            continue
        basis = vt[:rank]
        grid = sphere_grid(rank, 4000, "L2") @ basis
        assert sphere_grid_minmax(grid, np.ascontiguousarray(s.u)) > 0
        checked += 1
    assert checked >= 30


def test_l2_iteration_cap(rng):
    s = inside_summary(rng, 3, 40)
    with pytest.raises(SolverError) as err:
        lambda_sharp(s, "L2", max_iter=1)
    assert err.value.diagnostics["max_iter"] == 1


def test_high_dimensional_infeasible_is_outside(rng):
    # k + 1 > n_y: tbar_x off the affine hull almost surely
    s = random_summary(rng, 30, 10)
    h = classify_hull(s)
    assert h.kind is HullKind.OUTSIDE
    check_witnesses(s, h)


def test_l2_solvers_agree(rng):
    for _ in range(40):
        s = random_summary(rng, int(rng.integers(1, 5)), int(rng.integers(1, 8)))
        wolfe = lambda_sharp(s, "L2").value
        fw = lambda_sharp(s, "L2", method="frank_wolfe", max_iter=200000).value
        assert fw == pytest.approx(wolfe, abs=2e-9)
