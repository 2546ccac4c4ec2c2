"""Where does ``tbar_x`` sit relative to the polytope ``C = conv{t_j^y}``?

``classify_hull`` answers relative interior / relative boundary / outside by
solving one linear program,

    maximize s  subject to  sum_j a_j u_j = 0,  sum_j a_j = 1,  a_j >= s,

whose optimum is the largest uniform lower bound on convex weights that
reproduce ``tbar_x``. A positive optimum means every point carries strictly
positive weight (relative interior); zero means some weight must vanish
(relative boundary); a negative optimum or an infeasible system means
``tbar_x`` lies outside ``C``.

``lambda_sharp`` returns the dual-norm distance from ``tbar_x`` to ``C``,
which is the smallest penalty weight for which the norm-penalized loss stays
bounded below. Supported pairs: an l1 penalty measured in the l-infinity
norm (an LP), and an l2 penalty measured in the l2 norm (Wolfe's
min-norm-point algorithm, with away-step Frank-Wolfe as an alternative).

The boundary band is absolute: ``|s| <= tol`` is reported as boundary and
``lambda_sharp <= tol`` as membership. Exact relint/relbd is not decidable
in floating point without such a band.
"""

from dataclasses import dataclass
from enum import Enum
import math
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from . import kernels
from .errors import SolverError, UnsupportedDimensionError

DEFAULT_TOL = 1e-8

_HIGHS_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


class HullKind(str, Enum):
    REL_INTERIOR = "RelInterior"
    REL_BOUNDARY = "RelBoundary"
    OUTSIDE = "Outside"


class DualNorm(str, Enum):
    LINF = "Linf"
    L2 = "L2"


@dataclass(frozen=True, eq=False)
class HullClassification:
    kind: HullKind
    lp_value: float
    weights: Optional[np.ndarray] = None
    separator: Optional[np.ndarray] = None
    margin: Optional[float] = None


@dataclass(frozen=True, eq=False)
class LambdaSharpResult:
    value: float
    nearest_point: np.ndarray
    hull_weights: np.ndarray
    dual_norm: DualNorm
    # Unit vector in the penalty norm (l1 for Linf, l2 for L2) attaining
    # max_j direction . u_j = -value; None when value <= DEFAULT_TOL, where
    # a separating direction would be numerical noise.
    direction: Optional[np.ndarray] = None


def _solve_lp(c, method="highs", **kw):
    res = linprog(c, method=method, options=_HIGHS_OPTIONS, **kw)
    if res.status not in (0, 2):
        raise SolverError(
            f"LP solver failed: {res.message}",
            {"status": res.status, "message": res.message,
             "nit": getattr(res, "nit", None)})
    return res


def _clean_simplex(alpha):
    alpha = np.clip(np.asarray(alpha, dtype=np.float64), 0.0, None)
    total = alpha.sum()
    if total <= 0:
        raise SolverError("LP returned an empty weight vector")
    return alpha / total


def _as_dual_norm(dual_norm):
    return dual_norm if isinstance(dual_norm, DualNorm) else DualNorm(dual_norm)


def classify_hull(s, tol=DEFAULT_TOL):
    """Decide relint / relbd / outside for ``tbar_x`` against ``C``.

    Outside results carry a separator ``D`` with ``||D||_1 = 1`` and
    ``D . tbar_x - max_j D . t_j^y = margin > 0``. The margin is the
    l-infinity distance to ``C``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    n, k = s.u.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_eq = np.zeros((k + 1, n + 1))
    a_eq[:k, :n] = s.u.T
    a_eq[k, :n] = 1.0
    b_eq = np.zeros(k + 1)
    b_eq[k] = 1.0
    a_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    res = _solve_lp(c, A_ub=a_ub, b_ub=np.zeros(n), A_eq=a_eq, b_eq=b_eq,
                    bounds=[(None, None)] * (n + 1))

    if res.status == 0:
        alpha = res.x[:n]
        slack = float(alpha.min())
        if slack > tol:
            return HullClassification(HullKind.REL_INTERIOR, slack, weights=alpha)
        if slack >= -tol:
            return HullClassification(
                HullKind.REL_BOUNDARY, slack, weights=_clean_simplex(alpha))
    else:
        slack = -math.inf

    dist = lambda_sharp(s, DualNorm.LINF)
    if dist.value <= tol:
        # Outside the slack LP's band but within tol of C in distance.
        return HullClassification(
            HullKind.REL_BOUNDARY, max(slack, -tol), weights=dist.hull_weights)
    return HullClassification(
        HullKind.OUTSIDE, slack, separator=dist.direction, margin=dist.value)


def _lambda_sharp_linf(s):
    n, k = s.u.shape
    # variables (alpha_1..alpha_n, r): minimize r with |U^T alpha|_v <= r
    c = np.zeros(n + 1)
    c[-1] = 1.0
    a_ub = np.zeros((2 * k, n + 1))
    a_ub[:k, :n] = s.u.T
    a_ub[k:, :n] = -s.u.T
    a_ub[:, -1] = -1.0
    a_eq = np.ones((1, n + 1))
    a_eq[0, -1] = 0.0
    bounds = [(0, None)] * n + [(None, None)]
    # interior point + crossover: same vertex, about twice as fast here
    res = _solve_lp(c, method="highs-ipm", A_ub=a_ub, b_ub=np.zeros(2 * k),
                    A_eq=a_eq, b_eq=np.ones(1), bounds=bounds)
    if res.status != 0:
        raise SolverError("distance LP unexpectedly infeasible",
                          {"status": res.status, "message": res.message})
    alpha = _clean_simplex(res.x[:n])
    gap = s.u.T @ alpha
    value = float(np.abs(gap).max())
    direction = None
    if value > DEFAULT_TOL:
        # Inequality duals mu+ (rows U^T a <= r) and mu- (rows -U^T a <= r)
        # form the maximizer w = mu+ - mu- of min_j w . u_j over the unit
        # l1 ball; the descent direction is -w. HiGHS reports
        # marginals <= 0, hence the sign.
        mu = -res.ineqlin.marginals
        w = mu[:k] - mu[k:]
        norm = np.abs(w).sum()
        if norm > 0:
            direction = -w / norm
    return LambdaSharpResult(value, s.tbar_x + gap, alpha, DualNorm.LINF, direction)


_L2_SOLVERS = {
    "wolfe": kernels.min_norm_point,
    "frank_wolfe": kernels.away_frank_wolfe,
}


def _lambda_sharp_l2(s, max_iter=None, gap_tol=1e-9, method="wolfe"):
    n = s.n_y
    max_iter = 100 * n if max_iter is None else max_iter
    u = np.ascontiguousarray(s.u)
    alpha, x, gap, iters, converged = _L2_SOLVERS[method](u, max_iter, gap_tol)
    if not converged:
        raise SolverError(
            f"{method} min-norm-point solver stopped before the gap tolerance",
            {"iterations": int(iters), "gap": float(gap), "max_iter": max_iter})
    alpha = _clean_simplex(alpha)
    x = s.u.T @ alpha
    value = float(np.sqrt(x @ x))
    direction = -x / value if value > DEFAULT_TOL else None
    return LambdaSharpResult(value, s.tbar_x + x, alpha, DualNorm.L2, direction)


def lambda_sharp(s, dual_norm=DualNorm.LINF, max_iter=None, method="wolfe"):
    """Dual-norm distance from ``tbar_x`` to ``conv{t_j^y}``.

    ``max_iter`` and ``method`` only apply to the L2 solver: ``"wolfe"``
    (min-norm-point, default) or ``"frank_wolfe"`` (away-step). Both stop
    once the distance gap is at most 1e-9; the default cap is ``100 * n_y``
    iterations.
    """
    dual_norm = _as_dual_norm(dual_norm)
    if dual_norm is DualNorm.LINF:
        return _lambda_sharp_linf(s)
    if method not in _L2_SOLVERS:
        raise ValueError(f"unknown L2 method {method!r}")
    return _lambda_sharp_l2(s, max_iter=max_iter, method=method)


def sphere_grid(k, grid_n, dual_norm):
    """Directions on the unit sphere of the penalty norm (l1 or l2), k <= 3."""
    dual_norm = _as_dual_norm(dual_norm)
    if k == 1:
        return np.array([[-1.0], [1.0]])
    if k == 2:
        t = 2 * np.pi * np.arange(grid_n) / grid_n
        pts = np.column_stack([np.cos(t), np.sin(t)])
    elif k == 3:
        # Fibonacci lattice: near-uniform coverage of S^2.
        i = np.arange(grid_n) + 0.5
        z = 1 - 2 * i / grid_n
        r = np.sqrt(1 - z * z)
        phi = np.pi * (3 - np.sqrt(5)) * i
        pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    else:
        raise UnsupportedDimensionError(f"sphere grid supports k <= 3, got k={k}")
    if dual_norm is DualNorm.LINF:
        pts = pts / np.abs(pts).sum(axis=1, keepdims=True)
    return pts


def minimax_bruteforce(s, dual_norm=DualNorm.LINF, grid_n=2000, clamp=True):
    """Grid evaluation of ``-min_{||D|| = 1} max_j D . u_j`` for k <= 3.

    A test oracle for ``lambda_sharp`` built from a different formula: the
    sphere is the unit sphere of the penalty norm (l1 when ``dual_norm`` is
    Linf, l2 when L2). When ``tbar_x`` is inside ``C`` the raw value is
    <= 0 and the distance is 0; ``clamp`` applies that.
    """
    if s.k > 3:
        raise UnsupportedDimensionError(f"brute-force minimax needs k <= 3, got k={s.k}")
    if grid_n < 100:
        raise ValueError("grid_n must be at least 100")
    grid = sphere_grid(s.k, grid_n, dual_norm)
    value = -float(kernels.sphere_grid_minmax(grid, np.ascontiguousarray(s.u)))
    if clamp and not value > 0:
        return 0.0
    return value
