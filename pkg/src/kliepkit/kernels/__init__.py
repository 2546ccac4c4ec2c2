"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly, unless the environment
variable ``KLIEPKIT_DISABLE_NUMBA`` is set to a truthy value (``1``,
``true``, ``yes``). The choice is made once at import time.
"""

import os

from . import _numpy as numpy_impl

try:
    from . import _numba as numba_impl
except ImportError:  # numba missing or broken
    numba_impl = None

NUMBA_DISABLED = os.environ.get("KLIEPKIT_DISABLE_NUMBA", "").strip().lower() in {
    "1", "true", "yes", "on"}

_impl = numpy_impl if NUMBA_DISABLED or numba_impl is None else numba_impl
BACKEND = "numpy" if _impl is numpy_impl else "numba"

pairwise_stats = _impl.pairwise_stats
log_mean_exp = _impl.log_mean_exp
softmax = _impl.softmax
loss_and_grad = _impl.loss_and_grad
sphere_grid_minmax = _impl.sphere_grid_minmax
away_frank_wolfe = _impl.away_frank_wolfe
min_norm_point = _impl.min_norm_point

__all__ = [
    "BACKEND",
    "numpy_impl",
    "numba_impl",
    "pairwise_stats",
    "log_mean_exp",
    "softmax",
    "loss_and_grad",
    "sphere_grid_minmax",
    "away_frank_wolfe",
    "min_norm_point",
]
