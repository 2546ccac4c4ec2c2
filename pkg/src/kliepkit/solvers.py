"""First-order minimization of the (penalized) KLIEP loss and existence reports.

All fits start at ``delta = 0``, where the objective is exactly 0. Gradients
of the loss are convex combinations of the ``u_j``, so unpenalized iterates
never leave ``span{u_j}``.

Divergence detection is a heuristic run inside the solver. It fires when

* the objective drops below ``-log(n_y) - divergence_loss_margin``, or
* ``||delta||_inf`` exceeds ``divergence_norm_cap`` (descent is monotone).

A firing is confirmed with the distance LP before ``UnboundedDetected`` is
returned: the penalty weight must sit strictly below ``lambda_sharp``. The
certificate is the LP's direction, normalized in the penalty norm. The
first rule can only fire when the objective is unbounded below, because a
bounded objective never falls under ``-log(n_y)``. The elastic net always
has a minimizer, so detection is off for it.
"""

from dataclasses import dataclass
from enum import Enum
import math
from typing import Optional

import numpy as np

from .errors import NumericalError
from .geometry import DEFAULT_TOL, DualNorm, HullClassification, HullKind, \
    LambdaSharpResult, classify_hull, lambda_sharp
from .losscore import ELASTIC_NET, L1, L2, NONE, PenaltySpec, loss_and_gradient, \
    loss_increment, softmax_weights


@dataclass(frozen=True)
class SolveOptions:
    max_iters: int = 10000
    grad_tol: float = 1e-8
    step_init: float = 1.0
    backtrack_factor: float = 0.5
    divergence_norm_cap: float = 1e6
    divergence_loss_margin: float = 10.0
    accelerate: bool = False

    def __post_init__(self):
        for name in ("max_iters", "grad_tol", "step_init", "divergence_norm_cap",
                     "divergence_loss_margin"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must lie in (0, 1)")


class FitStatus(str, Enum):
    CONVERGED = "Converged"
    UNBOUNDED_DETECTED = "UnboundedDetected"
    ITER_LIMIT = "IterLimit"


@dataclass(frozen=True, eq=False)
class FitResult:
    delta_hat: np.ndarray
    objective: float
    status: FitStatus
    iterations: int
    residual: float
    certificate: Optional[np.ndarray] = None
    history: Optional[np.ndarray] = None


class Verdict(str, Enum):
    MINIMUM_EXISTS = "MinimumExists"
    BOUNDED_NO_MINIMUM = "BoundedNoMinimum"
    BOUNDED_BELOW_BOUNDARY_CASE = "BoundedBelowBoundaryCase"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True, eq=False)
class ExistenceReport:
    classification: HullClassification
    lambda_sharp: Optional[LambdaSharpResult]
    penalty: PenaltySpec
    verdict: Verdict
    explanation: str


def dual_norm_for(p):
    """Norm in which lambda_sharp is measured for a penalty (l1 -> Linf)."""
    return DualNorm.L2 if p.kind == L2 else DualNorm.LINF


def _soft_threshold(z, thresh):
    return np.sign(z) * np.maximum(np.abs(z) - thresh, 0.0)


def prox(p, z, step):
    """Proximal map of ``step * penalty`` at ``z``."""
    if p.kind == NONE:
        return z
    if p.kind == L1:
        return _soft_threshold(z, p.lam * step)
    if p.kind == L2:
        nz = math.sqrt(z @ z)
        if nz <= p.lam * step:
            return np.zeros_like(z)
        return z * (1.0 - p.lam * step / nz)
    return _soft_threshold(z, p.lam1 * step) / (1.0 + 2.0 * p.lam2 * step)


def _certify(s, p, tol=DEFAULT_TOL):
    """LP check that the penalized objective is unbounded; direction or None."""
    ls = lambda_sharp(s, dual_norm_for(p))
    lam = 0.0 if p.kind == NONE else p.lam
    if ls.direction is not None and ls.value > lam + tol:
        return ls.direction
    return None


def fit_penalized(s, p=None, opts=None):
    """Proximal gradient with backtracking on ``loss + penalty``.

    Converged means the prox-gradient residual ``||(x - x+)/step||_inf`` is at
    most ``grad_tol``; without a penalty that residual is the gradient.
    """
    p = PenaltySpec.none() if p is None else p
    opts = SolveOptions() if opts is None else opts
    beta = opts.backtrack_factor
    floor = -math.log(s.n_y) - opts.divergence_loss_margin
    detect = p.kind != ELASTIC_NET
    norm_rule = detect

    x = np.zeros(s.k)
    f, g = loss_and_gradient(s, x)
    F = f + p.value(x)
    history = [F]
    step = opts.step_init
    x_prev, momentum = x, 1.0
    residual = math.inf

    for it in range(1, opts.max_iters + 1):
        extrapolated = opts.accelerate and momentum > 1.0 and x is not x_prev
        next_momentum = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * momentum ** 2))
        if extrapolated:
            y = x + ((momentum - 1.0) / next_momentum) * (x - x_prev)
            fy, gy = loss_and_gradient(s, y)
        else:
            y, fy, gy = x, f, g

        wy = softmax_weights(s, y)
        while True:
            x_new = prox(p, y - step * gy, step)
            diff = x_new - y
            # the increment is formed directly: subtracting two large losses
            # would cap the attainable residual near sqrt(eps * |f|)
            linear, quad = gy @ diff, (diff @ diff) / (2.0 * step)
            inc = loss_increment(s, wy, diff)
            # -inf is a valid (huge) decrease; nan compares False
            if inc <= linear + quad + 1e-12 * (abs(linear) + quad):
                f_new, g_new = loss_and_gradient(s, x_new)
                break
            step *= beta
            if step < 1e-300:
                raise NumericalError("step size underflow in backtracking")
        F_new = f_new + p.value(x_new)
        if not (math.isfinite(F_new) and np.all(np.isfinite(g_new))):
            raise NumericalError("non-finite objective or gradient")

        if extrapolated and F_new > F:
            # restart momentum; redo a plain step from the last accepted iterate
            x_prev, momentum = x, 1.0
            continue
        if opts.accelerate:
            momentum = next_momentum

        residual = float(np.abs(diff).max()) / step
        x_prev, x, f, g, F = x, x_new, f_new, g_new, F_new
        history.append(F)

        if residual <= opts.grad_tol:
            return FitResult(x, F, FitStatus.CONVERGED, it, residual,
                             history=np.array(history))
        if detect and (F < floor or (norm_rule and np.abs(x).max() > opts.divergence_norm_cap)):
            cert = _certify(s, p)
            if cert is not None:
                return FitResult(x, F, FitStatus.UNBOUNDED_DETECTED, it, residual,
                                 certificate=cert, history=np.array(history))
            # heuristic misfire: stop consulting the norm rule
            norm_rule = False
            if F < floor:
                detect = False
        step /= beta

    return FitResult(x, F, FitStatus.ITER_LIMIT, opts.max_iters, residual,
                     history=np.array(history))


def fit_kliep(s, opts=None):
    """Unpenalized KLIEP fit (gradient descent with backtracking)."""
    return fit_penalized(s, PenaltySpec.none(), opts)


def existence_report(s, p=None, tol=DEFAULT_TOL):
    """Verdict on whether the (penalized) KLIEP objective has a minimizer."""
    p = PenaltySpec.none() if p is None else p
    hull = classify_hull(s, tol=tol)
    ls = None
    if p.kind == ELASTIC_NET:
        return ExistenceReport(
            hull, ls, p, Verdict.MINIMUM_EXISTS,
            "elastic net objective is coercive for lam2 > 0")
    if hull.kind is HullKind.REL_INTERIOR:
        verdict, why = Verdict.MINIMUM_EXISTS, "tbar_x lies in the relative interior"
    elif hull.kind is HullKind.REL_BOUNDARY:
        if p.kind != NONE and p.lam > 0:
            verdict, why = (Verdict.MINIMUM_EXISTS,
                            "relative boundary, positive penalty makes the objective coercive")
        else:
            verdict, why = (Verdict.BOUNDED_NO_MINIMUM,
                            "relative boundary: bounded below, infimum not attained")
    else:
        ls = lambda_sharp(s, dual_norm_for(p))
        lam = 0.0 if p.kind == NONE else p.lam
        if lam > ls.value + tol:
            verdict = Verdict.MINIMUM_EXISTS
            why = f"outside, penalty {lam:g} exceeds lambda_sharp {ls.value:.6g}"
        elif lam < ls.value - tol:
            verdict = Verdict.UNBOUNDED
            why = f"outside, penalty {lam:g} below lambda_sharp {ls.value:.6g}"
        else:
            verdict = Verdict.BOUNDED_BELOW_BOUNDARY_CASE
            why = (f"outside, penalty equals lambda_sharp {ls.value:.6g}: "
                   "bounded below, attainment not asserted")
    return ExistenceReport(hull, ls, p, verdict, why)
