import numpy as np
import pytest

from kliepkit.statmodel import SufficientSummary

TOY_POINTS = [[-1.0], [0.0], [1.0], [2.0]]
UNIT_SQUARE = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]


def toy(tbar):
    return SufficientSummary.from_parts([float(tbar)], TOY_POINTS)


def square(tbar):
    return SufficientSummary.from_parts(tbar, UNIT_SQUARE)


def random_summary(rng, k, n_y, scale=1.0):
    ty = scale * rng.standard_normal((n_y, k))
    tbar = scale * rng.standard_normal(k)
    return SufficientSummary.from_parts(tbar, ty)


def inside_summary(rng, k, n_y, boundary=False):
    """Random instance with tbar_x a convex combination of the Y points.

    With ``boundary`` the combination uses only two points of a set whose
    hull is a polygon containing them as an edge: a vertex is used directly.
    """
    ty = rng.standard_normal((n_y, k))
    if boundary:
        tbar = ty[int(rng.integers(n_y))]
    else:
        w = rng.dirichlet(np.ones(n_y))
        tbar = w @ ty
    return SufficientSummary.from_parts(tbar, ty)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
