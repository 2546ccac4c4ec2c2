from .config import ExperimentConfig, load_config, parse_config
from .experiment import ReplicationRecord, read_records, run_experiment, summarize_records
from .plot import emit_summary_plot
from .toy import toy_profile

__all__ = [
    "ExperimentConfig",
    "ReplicationRecord",
    "emit_summary_plot",
    "load_config",
    "parse_config",
    "read_records",
    "run_experiment",
    "summarize_records",
    "toy_profile",
]
