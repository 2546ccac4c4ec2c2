"""Graphs, paired precision matrices and Gaussian samples for the
differential-network experiments.

Edge-coefficient convention. The densities are written as
``exp(-1/2 * {sum_u theta0 x_u^2 + sum_edges c x_u x_v})`` with each
undirected edge counted once, which matches ``-x^T Theta x / 2`` when
``Theta_uv = c / 2`` (``edge_coeff_mode="half"``, the default). The mode
``"full"`` puts ``c`` itself in the precision matrix.

Randomness. Each generator takes an explicit ``numpy.random.Generator``.
``replication_rng`` derives independent per-(replication, role) streams
from a base seed through ``numpy.random.SeedSequence`` hashing. Normal
variates come from numpy's ziggurat sampler (``Generator.standard_normal``).
"""

from dataclasses import dataclass
import math
from typing import Tuple

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NotPositiveDefinite
from .statmodel import half_vectorize

LATTICE = "lattice"
ERDOS_RENYI = "erdos_renyi"

STRICT = "strict"
DIAGONAL_REPAIR = "diagonal_repair"

HALF = "half"
FULL = "full"

# stream roles for replication_rng
ROLE_GRAPH, ROLE_EDGES, ROLE_X, ROLE_Y = range(4)


@dataclass(frozen=True)
class GraphSpec:
    variant: str
    m: int
    edge_prob: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.variant == LATTICE:
            side = math.isqrt(self.m)
            if side < 2 or side * side != self.m:
                raise ValueError(f"lattice needs m = s^2 with s >= 2, got m={self.m}")
        elif self.variant == ERDOS_RENYI:
            if self.m < 2:
                raise ValueError("Erdos-Renyi graph needs m >= 2")
            if not 0 < self.edge_prob < 1:
                raise ValueError("edge_prob must lie strictly inside (0, 1)")
        else:
            raise ValueError(f"unknown graph variant {self.variant!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def lattice(cls, side, seed=0):
        return cls(LATTICE, side * side, seed=seed)

    @classmethod
    def erdos_renyi(cls, m, edge_prob, seed=0):
        return cls(ERDOS_RENYI, m, edge_prob=edge_prob, seed=seed)


def replication_rng(base_seed, replication, role, *extra):
    """Generator for one (replication, role) pair; ``extra`` keys further."""
    key = [int(base_seed), int(replication), int(role), *map(int, extra)]
    return np.random.default_rng(np.random.SeedSequence(key))


def build_graph(spec, rng=None):
    """Sorted list of edges ``(u, v)`` with ``u < v`` (0-based nodes).

    Erdos-Renyi graphs draw from ``rng`` when given, else from a generator
    seeded with ``spec.seed``.
    """
    if spec.variant == LATTICE:
        side = math.isqrt(spec.m)
        edges = []
        for r in range(side):
            for c in range(side):
                node = r * side + c
                if c + 1 < side:
                    edges.append((node, node + 1))
                if r + 1 < side:
                    edges.append((node, node + side))
        return sorted(edges)
    rng = np.random.default_rng(spec.seed) if rng is None else rng
    iu, iv = np.triu_indices(spec.m, k=1)
    keep = rng.random(iu.shape[0]) < spec.edge_prob
    return [(int(u), int(v)) for u, v in zip(iu[keep], iv[keep])]


@dataclass(frozen=True, eq=False)
class PrecisionPair:
    theta_p: np.ndarray
    theta_q: np.ndarray
    edges: Tuple[Tuple[int, int], ...]
    changed_edges: Tuple[Tuple[int, int], ...]
    params: Tuple[float, float, float]
    pd_shift: float = 0.0
    edge_coeff_mode: str = HALF

    @property
    def m(self):
        return self.theta_p.shape[0]

    def delta_target(self):
        """Half-vectorized ``Theta_p - Theta_q``: the estimation target."""
        return half_vectorize(self.theta_p) - half_vectorize(self.theta_q)


def _min_eig(a):
    return float(np.linalg.eigvalsh(a)[0])


def _is_pd(a):
    try:
        np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return False
    return True


def _fill(m, theta0, edges, coeff):
    theta = np.diag(np.full(m, float(theta0)))
    for (u, v), c in zip(edges, coeff):
        theta[u, v] = theta[v, u] = c
    return theta


def build_precision_pair(m, edges, d, theta0, theta1, theta1_star,
                         pd_policy=STRICT, rng=None, edge_coeff_mode=HALF,
                         min_eig_target=0.1, shift_resolution=1e-6):
    """Precision matrices for P and Q differing on ``d`` random edges.

    The changed edges are the first ``d`` entries of a uniform random
    permutation of ``edges``, so for a fixed generator state the changed
    sets are nested in ``d``.

    ``pd_policy="diagonal_repair"`` leaves both matrices alone when both
    already admit a Cholesky factor. Otherwise it adds the same shift to
    every diagonal entry of both, the smallest multiple of
    ``shift_resolution`` bringing both minimum eigenvalues to at least
    ``min_eig_target``.
    """
    edges = sorted((min(u, v), max(u, v)) for u, v in edges)
    if not 0 <= d <= len(edges):
        raise ValueError(f"d={d} outside [0, {len(edges)}]")
    if edge_coeff_mode not in (HALF, FULL):
        raise ValueError(f"unknown edge_coeff_mode {edge_coeff_mode!r}")
    if pd_policy not in (STRICT, DIAGONAL_REPAIR):
        raise ValueError(f"unknown pd_policy {pd_policy!r}")
    scale = 0.5 if edge_coeff_mode == HALF else 1.0
    rng = np.random.default_rng() if rng is None else rng

    order = rng.permutation(len(edges)) if edges else np.zeros(0, dtype=int)
    changed = sorted(edges[i] for i in order[:d])
    changed_set = set(changed)
    coeff_p = [scale * theta1] * len(edges)
    coeff_q = [scale * (theta1_star if e in changed_set else theta1) for e in edges]
    theta_p = _fill(m, theta0, edges, coeff_p)
    theta_q = _fill(m, theta0, edges, coeff_q)

    shift = 0.0
    if not (_is_pd(theta_p) and _is_pd(theta_q)):
        lo = min(_min_eig(theta_p), _min_eig(theta_q))
        if pd_policy == STRICT:
            raise NotPositiveDefinite(
                f"precision matrix not positive definite (min eigenvalue {lo:.4g})",
                min_eigenvalue=lo)
        shift = math.ceil((min_eig_target - lo) / shift_resolution) * shift_resolution
        theta_p = theta_p + shift * np.eye(m)
        theta_q = theta_q + shift * np.eye(m)

    return PrecisionPair(theta_p, theta_q, tuple(edges), tuple(changed),
                         (float(theta0), float(theta1), float(theta1_star)),
                         shift, edge_coeff_mode)


def sample_gaussian(precision, n, rng):
    """``n`` draws from N(0, precision^-1): rows ``x = L^-T z`` with
    ``precision = L L^T``."""
    precision = np.asarray(precision, dtype=np.float64)
    if n < 1:
        raise ValueError("n must be at least 1")
    try:
        chol = np.linalg.cholesky(precision)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite(
            "precision matrix is not positive definite",
            min_eigenvalue=_min_eig(precision)) from None
    z = rng.standard_normal((precision.shape[0], n))
    return solve_triangular(chol, z, lower=True, trans="T").T


def lambda_liu(m, n_p):
    """Tuning value ``2.5 * sqrt(ln(m) / n_p)``."""
    if m < 2 or n_p < 1:
        raise ValueError("need m >= 2 and n_p >= 1")
    return 2.5 * math.sqrt(math.log(m) / n_p)
