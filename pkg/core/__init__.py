"""Core module for the halting-time laboratory."""

from .ensembles import (
    trial_stream,
    sample_rhs,
    sample_wishart,
    sample_coupling_tensor,
    sample_sphere_point,
)
from .cg import cg_halting_time
from .spin_glass import gradient_descent_halting
from .deep_net import load_mnist_idx, sgd_train_halting
from .stats import moments, normalize_fluctuations, ks_distance
from .storage import ExperimentConfig, TrialRecord, ResultsStore, RunLogger
from .harness import run_experiment, summarize, compare_ensembles

__all__ = [
    # Ensembles
    "trial_stream",
    "sample_rhs",
    "sample_wishart",
    "sample_coupling_tensor",
    "sample_sphere_point",
    # Algorithms
    "cg_halting_time",
    "gradient_descent_halting",
    "load_mnist_idx",
    "sgd_train_halting",
    # Statistics
    "moments",
    "normalize_fluctuations",
    "ks_distance",
    # Storage
    "ExperimentConfig",
    "TrialRecord",
    "ResultsStore",
    "RunLogger",
    # Harness
    "run_experiment",
    "summarize",
    "compare_ensembles",
]
