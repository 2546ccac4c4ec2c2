"""Experiment configuration: a single JSON document, unknown keys rejected."""

from dataclasses import dataclass, fields
import json
import math
from typing import Tuple

from ..errors import ConfigError
from ..geometry import DualNorm
from ..simgen import DIAGONAL_REPAIR, ERDOS_RENYI, FULL, HALF, LATTICE, STRICT, GraphSpec

_PD_ALIASES = {"strict": STRICT, "diagonal_repair": DIAGONAL_REPAIR,
               "diagonalrepair": DIAGONAL_REPAIR}
_NORM_ALIASES = {"linf": DualNorm.LINF, "l2": DualNorm.L2}
_GRAPH_ALIASES = {"lattice": LATTICE, "erdos_renyi": ERDOS_RENYI,
                  "erdosrenyi": ERDOS_RENYI, "er": ERDOS_RENYI}


@dataclass(frozen=True)
class ExperimentConfig:
    graph: str
    m_list: Tuple[int, ...]
    np_over_logm_list: Tuple[int, ...]
    n_q: int
    d_list: Tuple[int, ...]
    theta0: float
    theta1: float
    theta1_star: Tuple[float, ...]
    replications: int
    base_seed: int
    pd_policy: str = STRICT
    dual_norm: DualNorm = DualNorm.LINF
    edge_coeff_mode: str = HALF
    edge_prob: float = 0.4
    record_wall_ms: bool = False

    def graph_spec(self, m):
        if self.graph == LATTICE:
            return GraphSpec(LATTICE, m)
        return GraphSpec(ERDOS_RENYI, m, edge_prob=self.edge_prob)

    def n_p(self, m, ratio):
        """X-sample size: ``round(ratio * ln m)``."""
        return max(1, int(round(ratio * math.log(m))))


_REQUIRED = {"graph", "m_list", "np_over_logm_list", "n_q", "d_list", "theta0",
             "theta1", "theta1_star", "replications", "base_seed"}
_KNOWN = {f.name for f in fields(ExperimentConfig)}


def _int_list(raw, name, minimum):
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        raw = [raw]
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{name} must be a nonempty list")
    out = []
    for v in raw:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or v != int(v) or v < minimum:
            raise ConfigError(f"{name} entries must be integers >= {minimum}, got {v!r}")
        out.append(int(v))
    return tuple(out)


def _int(raw, name, minimum):
    if isinstance(raw, list):
        raise ConfigError(f"{name} must be a single integer")
    return _int_list(raw, name, minimum)[0]


def _real(raw, name):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)) or not math.isfinite(raw):
        raise ConfigError(f"{name} must be a finite number, got {raw!r}")
    return float(raw)


def parse_config(doc):
    """Validate a decoded JSON object and build an ``ExperimentConfig``.

    ``graph`` is either a variant name or an object
    ``{"variant": ..., "edge_prob": ...}``. ``theta1_star`` may be a number
    or a list of numbers swept as an extra grid axis.
    """
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - _KNOWN
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = _REQUIRED - set(doc)
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")

    graph = doc["graph"]
    edge_prob = doc.get("edge_prob", 0.4)
    if isinstance(graph, dict):
        extra = set(graph) - {"variant", "edge_prob"}
        if extra:
            raise ConfigError(f"unknown graph keys: {sorted(extra)}")
        edge_prob = graph.get("edge_prob", edge_prob)
        graph = graph.get("variant")
    variant = _GRAPH_ALIASES.get(str(graph).lower())
    if variant is None:
        raise ConfigError(f"unknown graph variant {graph!r}")
    edge_prob = _real(edge_prob, "edge_prob")
    if variant == ERDOS_RENYI and not 0 < edge_prob < 1:
        raise ConfigError("edge_prob must lie strictly inside (0, 1)")

    m_list = _int_list(doc["m_list"], "m_list", 2)
    if variant == LATTICE:
        for m in m_list:
            if math.isqrt(m) ** 2 != m:
                raise ConfigError(f"lattice m must be a perfect square, got {m}")

    t1s = doc["theta1_star"]
    t1s = t1s if isinstance(t1s, list) else [t1s]
    if not t1s:
        raise ConfigError("theta1_star must not be empty")

    pd_policy = _PD_ALIASES.get(str(doc.get("pd_policy", STRICT)).lower())
    if pd_policy is None:
        raise ConfigError(f"unknown pd_policy {doc.get('pd_policy')!r}")
    dual_norm = _NORM_ALIASES.get(str(doc.get("dual_norm", "Linf")).lower())
    if dual_norm is None:
        raise ConfigError(f"unknown dual_norm {doc.get('dual_norm')!r}")
    mode = str(doc.get("edge_coeff_mode", HALF)).lower()
    if mode not in (HALF, FULL):
        raise ConfigError(f"unknown edge_coeff_mode {mode!r}")
    seed = doc["base_seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
        raise ConfigError("base_seed must be an unsigned 64-bit integer")
    wall = doc.get("record_wall_ms", False)
    if not isinstance(wall, bool):
        raise ConfigError("record_wall_ms must be true or false")

    return ExperimentConfig(
        graph=variant,
        m_list=m_list,
        np_over_logm_list=_int_list(doc["np_over_logm_list"], "np_over_logm_list", 1),
        n_q=_int(doc["n_q"], "n_q", 1),
        d_list=_int_list(doc["d_list"], "d_list", 0),
        theta0=_real(doc["theta0"], "theta0"),
        theta1=_real(doc["theta1"], "theta1"),
        theta1_star=tuple(_real(v, "theta1_star") for v in t1s),
        replications=_int(doc["replications"], "replications", 1),
        base_seed=seed,
        pd_policy=pd_policy,
        dual_norm=dual_norm,
        edge_coeff_mode=mode,
        edge_prob=edge_prob,
        record_wall_ms=wall,
    )


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(doc)
