"""Sufficient-statistic maps and the sample summary used downstream.

Two maps are supported:

* ``identity(m)``: ``t(x) = x``, so ``k = m``. Handy for one-dimensional toy
  problems stated directly in terms of statistics.
* ``gaussian_pairwise(m)``: the Gaussian graphical-model statistics with
  ``k = m(m+1)/2`` coordinates ordered lexicographically over pairs
  ``(u, v)`` with ``u <= v``. Coordinate ``(u, u)`` is ``-x_u**2 / 2`` and
  coordinate ``(u, v)`` for ``u < v`` is ``-x_u * x_v``.

With this convention the natural parameter of a centered Gaussian with
precision matrix ``Theta`` is its half-vectorization: ``theta_uu =
Theta_uu`` and ``theta_uv = Theta_uv`` for ``u < v``, since
``theta . t(x) = -x^T Theta x / 2``. A density written as
``exp(-1/2 * (sum_u c0 x_u^2 + sum_edges c1 x_u x_v))`` with every edge
counted once therefore has ``Theta_uv = c1 / 2``.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionError, EmptySampleError

IDENTITY = "identity"
GAUSSIAN_PAIRWISE = "gaussian_pairwise"


@dataclass(frozen=True)
class StatisticMap:
    variant: str
    m: int

    def __post_init__(self):
        if self.variant not in (IDENTITY, GAUSSIAN_PAIRWISE):
            raise ValueError(f"unknown statistic variant {self.variant!r}")
        if int(self.m) < 1:
            raise ValueError("m must be positive")

    @classmethod
    def identity(cls, m):
        return cls(IDENTITY, int(m))

    @classmethod
    def gaussian_pairwise(cls, m):
        return cls(GAUSSIAN_PAIRWISE, int(m))

    @property
    def dim_k(self):
        if self.variant == IDENTITY:
            return self.m
        return self.m * (self.m + 1) // 2


def pair_index(u, v, m):
    """Position of pair ``(u, v)`` (0-based, any order) in the pairwise layout."""
    if u > v:
        u, v = v, u
    if not 0 <= u <= v < m:
        raise IndexError(f"pair ({u}, {v}) out of range for m={m}")
    return u * m - u * (u - 1) // 2 + (v - u)


def half_vectorize(theta):
    """Upper triangle of a square matrix in the pairwise coordinate order."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {theta.shape}")
    return theta[np.triu_indices(theta.shape[0])]


def _as_matrix(a, name):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise DimensionError(f"{name} must be a 2-D array, got {a.ndim}-D")
    if a.shape[0] == 0:
        raise EmptySampleError(f"{name} has no rows")
    if a.shape[1] == 0:
        raise DimensionError(f"{name} has no columns")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def apply_statistic(stat_map, X):
    """Map each observation (row of ``X``) to its sufficient statistic."""
    X = _as_matrix(X, "X")
    if X.shape[1] != stat_map.m:
        raise DimensionError(
            f"statistic expects m={stat_map.m} columns, observations have {X.shape[1]}")
    if stat_map.variant == IDENTITY:
        return X.copy()
    return kernels.pairwise_stats(np.ascontiguousarray(X))


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SufficientSummary:
    """Average X-statistic, the Y-statistics, and their centered differences.

    ``u[j] = ty[j] - tbar_x``. The KLIEP loss, its gradient and every
    existence diagnostic depend on the data only through ``u``.
    """

    tbar_x: np.ndarray
    ty: np.ndarray
    u: np.ndarray

    @property
    def n_y(self):
        return self.ty.shape[0]

    @property
    def k(self):
        return self.ty.shape[1]

    @classmethod
    def from_parts(cls, tbar_x, ty):
        tbar_x = np.atleast_1d(np.asarray(tbar_x, dtype=np.float64))
        ty = _as_matrix(ty, "ty")
        if tbar_x.ndim != 1 or tbar_x.shape[0] != ty.shape[1]:
            raise DimensionError(
                f"tbar_x has length {tbar_x.shape}, ty has {ty.shape[1]} columns")
        if not np.all(np.isfinite(tbar_x)):
            raise ValueError("tbar_x contains non-finite entries")
        return cls(_frozen(tbar_x), _frozen(ty), _frozen(ty - tbar_x))


def summarize(tx, ty):
    """Reduce two statistic matrices (rows = observations) to a summary."""
    tx = _as_matrix(tx, "tx")
    ty = _as_matrix(ty, "ty")
    if tx.shape[1] != ty.shape[1]:
        raise DimensionError(
            f"tx has {tx.shape[1]} columns but ty has {ty.shape[1]}")
    return SufficientSummary.from_parts(tx.mean(axis=0), ty)


def summarize_samples(stat_map, X, Y):
    return summarize(apply_statistic(stat_map, X), apply_statistic(stat_map, Y))
