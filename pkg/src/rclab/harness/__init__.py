"""Experiment orchestration: configuration, runs, sweeps and result export."""

from .config import ExperimentConfig, config_from_dict, dump_config, load_config
from .experiment import (
    RunReport,
    dynamics_probe,
    execute,
    pca_rows,
    run_experiment,
    run_sweep,
    summarize,
)
from .export import export_results, read_bundle

__all__ = [
    "ExperimentConfig", "RunReport", "config_from_dict", "dump_config", "dynamics_probe",
    "execute", "export_results", "load_config", "pca_rows", "read_bundle", "run_experiment",
    "run_sweep", "summarize",
]
