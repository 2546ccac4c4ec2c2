"""Existence diagnostics and estimators for KLIEP density-ratio estimation
between two exponential-family samples."""

from .errors import (ConfigError, DimensionError, EmptySampleError, KliepError,
                     NotPositiveDefinite, NumericalError, SolverError,
                     UnsupportedDimensionError)
from .geometry import (DualNorm, HullClassification, HullKind, LambdaSharpResult,
                       classify_hull, lambda_sharp, minimax_bruteforce)
from .kernels import BACKEND
from .losscore import (PenaltySpec, kliep_gradient, kliep_loss, loss_increment,
                       penalized_objective, softmax_weights)
from .simgen import (GraphSpec, PrecisionPair, build_graph, build_precision_pair,
                     lambda_liu, sample_gaussian)
from .solvers import (ExistenceReport, FitResult, FitStatus, SolveOptions, Verdict,
                      existence_report, fit_kliep, fit_penalized)
from .statmodel import StatisticMap, SufficientSummary, apply_statistic, summarize

__version__ = "0.1.0"
