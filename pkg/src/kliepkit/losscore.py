"""Empirical KLIEP loss, softmax weights, gradient and penalized objectives.

The loss is evaluated in centered form,

    loss(d) = log( mean_j exp(d . u_j) ),    u_j = t_j^y - tbar_x,

which is algebraically the same as ``-d . tbar_x + log mean_j exp(d . t_j^y)``
but is exactly invariant to components of ``d`` orthogonal to every ``u_j``
and avoids cancellation between the linear and log terms. Log-sum-exp uses
max-subtraction, so scores in the thousands do not overflow.

Penalty conventions differ on purpose: ``l2`` adds ``lam * ||d||_2`` (the
norm itself), while ``elastic_net`` adds ``lam1 * ||d||_1 + lam2 * ||d||_2**2``
(the squared norm).
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionError

NONE = "none"
L1 = "l1"
L2 = "l2"
ELASTIC_NET = "elastic_net"


@dataclass(frozen=True)
class PenaltySpec:
    kind: str = NONE
    lam: float = 0.0
    lam1: float = 0.0
    lam2: float = 0.0

    def __post_init__(self):
        if self.kind not in (NONE, L1, L2, ELASTIC_NET):
            raise ValueError(f"unknown penalty kind {self.kind!r}")
        for name in ("lam", "lam1", "lam2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {value}")
        if self.kind == ELASTIC_NET and not self.lam2 > 0:
            raise ValueError("elastic net requires lam2 > 0")

    @classmethod
    def none(cls):
        return cls(NONE)

    @classmethod
    def l1(cls, lam):
        return cls(L1, lam=float(lam))

    @classmethod
    def l2(cls, lam):
        return cls(L2, lam=float(lam))

    @classmethod
    def elastic_net(cls, lam1, lam2):
        return cls(ELASTIC_NET, lam1=float(lam1), lam2=float(lam2))

    def value(self, d):
        if self.kind == NONE:
            return 0.0
        if self.kind == L1:
            return self.lam * float(np.abs(d).sum())
        if self.kind == L2:
            return self.lam * float(np.sqrt(d @ d))
        return self.lam1 * float(np.abs(d).sum()) + self.lam2 * float(d @ d)


def _delta(s, d):
    d = np.atleast_1d(np.asarray(d, dtype=np.float64))
    if d.ndim != 1 or d.shape[0] != s.k:
        raise DimensionError(f"delta has shape {d.shape}, summary has k={s.k}")
    return d


def kliep_loss(s, d):
    d = _delta(s, d)
    return float(kernels.log_mean_exp(s.u @ d))


def softmax_weights(s, d):
    """alpha_j(d) = exp(d . t_j^y) / sum_i exp(d . t_i^y)."""
    d = _delta(s, d)
    return kernels.softmax(s.u @ d)


def loss_increment(s, weights, step):
    """``L(d + step) - L(d)`` given ``weights = softmax_weights(s, d)``.

    Evaluated as ``log1p(sum_j w_j expm1(u_j . step))``, which keeps full
    relative precision when the loss itself is large and the increment tiny.
    Large moves fall back to a shifted log-sum-exp.
    """
    z = s.u @ _delta(s, step)
    if np.abs(z).max() <= 1.0:
        return float(np.log1p(weights @ np.expm1(z)))
    top = z.max()
    with np.errstate(divide="ignore"):
        return float(top + np.log(weights @ np.exp(z - top)))


def kliep_gradient(s, d):
    """-tbar_x + sum_j alpha_j(d) t_j^y."""
    d = _delta(s, d)
    return -s.tbar_x + softmax_weights(s, d) @ s.ty


def loss_and_gradient(s, d):
    """Loss and gradient from one fused pass; the solvers' inner call."""
    d = _delta(s, d)
    loss, grad = kernels.loss_and_grad(s.u, d)
    return float(loss), grad


def penalized_objective(s, d, p):
    d = _delta(s, d)
    return kliep_loss(s, d) + p.value(d)
