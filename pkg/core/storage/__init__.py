"""Storage module for the halting-time laboratory."""

from .models import (
    Algorithm,
    MatrixKind,
    CouplingKind,
    InputKind,
    DataSource,
    GradientNorm,
    StoppingKind,
    CostSource,
    parse_ensemble,
    MatrixEnsemble,
    CouplingEnsemble,
    CgConfig,
    SpinGlassConfig,
    StoppingRule,
    MlpArchitecture,
    ExperimentConfig,
    TrialRecord,
    MomentSummary,
    HistogramSpec,
    ReferenceRow,
    SummaryReport,
    ComparisonReport,
    RunEvent,
    inner_dimension,
)
from .results_store import ResultsStore, RECORD_COLUMNS
from .run_logger import RunLogger

__all__ = [
    # Enums
    "Algorithm",
    "MatrixKind",
    "CouplingKind",
    "InputKind",
    "DataSource",
    "GradientNorm",
    "StoppingKind",
    "CostSource",
    "parse_ensemble",
    # Ensemble and algorithm models
    "MatrixEnsemble",
    "CouplingEnsemble",
    "CgConfig",
    "SpinGlassConfig",
    "StoppingRule",
    "MlpArchitecture",
    # Experiment models
    "ExperimentConfig",
    "TrialRecord",
    # Statistics models
    "MomentSummary",
    "HistogramSpec",
    "ReferenceRow",
    "SummaryReport",
    "ComparisonReport",
    # Run log
    "RunEvent",
    "inner_dimension",
    # Managers
    "ResultsStore",
    "RECORD_COLUMNS",
    "RunLogger",
]
