"""Experiment harness: trial runners, parallel execution, summaries and calibration."""

from .runners import (
    ConfigurationError,
    BaseTrialRunner,
    CgTrialRunner,
    SpinGlassTrialRunner,
    DeepNetTrialRunner,
    get_trial_runner,
    model_label,
    ensemble_label,
)
from .experiment import (
    TrialFailureError,
    InsufficientTrialsError,
    run_experiment,
    check_flagged_fraction,
    converged_halting_times,
    find_reference,
    summarize,
    compare_ensembles,
)
from .calibration import CalibrationResult, calibrate_threshold

__all__ = [
    "ConfigurationError",
    "BaseTrialRunner",
    "CgTrialRunner",
    "SpinGlassTrialRunner",
    "DeepNetTrialRunner",
    "get_trial_runner",
    "model_label",
    "ensemble_label",
    "TrialFailureError",
    "InsufficientTrialsError",
    "run_experiment",
    "check_flagged_fraction",
    "converged_halting_times",
    "find_reference",
    "summarize",
    "compare_ensembles",
    "CalibrationResult",
    "calibrate_threshold",
]
