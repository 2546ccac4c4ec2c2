"""One-dimensional loss profiles for hand-made statistic sets."""

import numpy as np

from ..geometry import DualNorm, classify_hull, lambda_sharp
from ..losscore import kliep_loss
from ..statmodel import StatisticMap, SufficientSummary, apply_statistic


def toy_summary(ty_points, tbar_x):
    ty = apply_statistic(StatisticMap.identity(1), np.asarray(ty_points, float)[:, None])
    return SufficientSummary.from_parts([float(tbar_x)], ty)


def toy_profile(ty_points, tbar_x, delta_grid, out_csv=None):
    """Loss along ``delta_grid``; optionally written as ``delta,loss`` CSV.

    The CSV opens with a ``#`` comment line holding the classification and
    lambda_sharp. Returns ``(grid, losses, classification, lambda_sharp)``.
    """
    grid = np.asarray(delta_grid, dtype=np.float64).ravel()
    if grid.size == 0:
        raise ValueError("delta_grid is empty")
    s = toy_summary(ty_points, tbar_x)
    losses = np.array([kliep_loss(s, [d]) for d in grid])
    kind = classify_hull(s).kind
    dist = lambda_sharp(s, DualNorm.LINF).value
    if out_csv is not None:
        with open(out_csv, "w", encoding="utf-8") as fh:
            fh.write(f"# classification={kind.value} lambda_sharp={dist!r} "
                     f"tbar_x={float(tbar_x)!r}\n")
            fh.write("delta,loss\n")
            for d, v in zip(grid, losses):
                fh.write(f"{float(d)!r},{float(v)!r}\n")
    return grid, losses, kind, dist
