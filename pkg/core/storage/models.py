"""Pydantic data models for the halting-time laboratory."""

import math
import uuid
from datetime import datetime
from enum import Enum
from typing import Any, Optional, Literal

from pydantic import BaseModel, Field, field_validator, model_validator


class Algorithm(str, Enum):
    """Optimization algorithms whose halting times are measured."""
    CG = "cg"
    SPIN_GLASS = "spin_glass"
    DEEP_NET = "deep_net"


class MatrixKind(str, Enum):
    """Entry laws for X in A = XX*."""
    PBE = "PBE"  # Bernoulli +-1
    LOE = "LOE"  # real standard normal
    LUE = "LUE"  # complex standard normal


class CouplingKind(str, Enum):
    """Entry laws for the spin-glass couplings x_ijk."""
    GAUSSIAN = "gaussian"
    BERNOULLI = "bernoulli"
    UNIFORM = "uniform"


class InputKind(str, Enum):
    """Input ensembles for network training."""
    MNIST = "mnist"
    NOISE = "noise"


class DataSource(str, Enum):
    """Provenance of a dataset's images."""
    IDX_FILES = "idx_files"
    GAUSSIAN_NOISE = "gaussian_noise"
    SYNTHETIC = "synthetic"


class GradientNorm(str, Enum):
    """Which gradient norm the spin-glass stopping rule tests."""
    AMBIENT = "ambient"
    TANGENTIAL = "tangential"


class StoppingKind(str, Enum):
    """SGD stopping rules."""
    AVG_COST_DIFF = "avg_cost_diff"
    GRAD_NORM = "grad_norm"


class CostSource(str, Enum):
    """Cost values fed to the AvgCostDiff rule."""
    MINIBATCH = "minibatch"
    FULL = "full"


ENSEMBLE_KINDS: dict[Algorithm, type[Enum]] = {
    Algorithm.CG: MatrixKind,
    Algorithm.SPIN_GLASS: CouplingKind,
    Algorithm.DEEP_NET: InputKind,
}


def parse_ensemble(algorithm: Algorithm, name: str) -> Enum:
    """
    Resolve an ensemble name for an algorithm, case-insensitively.

    Args:
        algorithm: Algorithm the ensemble belongs to
        name: Ensemble name (e.g. "loe", "Bernoulli", "noise")

    Returns:
        The matching enum member
    """
    kinds = ENSEMBLE_KINDS[Algorithm(algorithm)]
    for member in kinds:
        if member.value.lower() == str(name).lower():
            return member
    valid = ", ".join(m.value for m in kinds)
    raise ValueError(f"Unknown ensemble '{name}' for {Algorithm(algorithm).value}. Choose from: {valid}")


# =============================================================================
# ENSEMBLE MODELS
# =============================================================================

class MatrixEnsemble(BaseModel):
    """Wishart-type ensemble A = XX* with X of shape n x m."""
    kind: MatrixKind
    n: int = Field(..., ge=1, description="System dimension N")
    m: int = Field(..., ge=1, description="Inner dimension M")

    @model_validator(mode="after")
    def _check_inner_dimension(self) -> "MatrixEnsemble":
        if self.m < self.n:
            raise ValueError(f"Inner dimension m={self.m} must be at least n={self.n}")
        return self


class CouplingEnsemble(BaseModel):
    """Coupling law for the 3-spin spherical spin glass."""
    kind: CouplingKind
    n: int = Field(..., ge=2, description="Number of spins N")


# =============================================================================
# ALGORITHM CONFIGURATION MODELS
# =============================================================================

class CgConfig(BaseModel):
    """Conjugate gradient halting configuration."""
    eps: float = Field(..., gt=0.0, description="Residual threshold")
    max_iter: int = Field(..., ge=1)
    record_history: bool = False


class SpinGlassConfig(BaseModel):
    """Projected gradient descent configuration."""
    eta: float = Field(..., gt=0.0, description="Fixed step size")
    eps: float = Field(..., gt=0.0, description="Gradient-norm threshold")
    max_iter: int = Field(..., ge=1)
    gradient_norm: GradientNorm = GradientNorm.TANGENTIAL
    record_history: bool = False


class StoppingRule(BaseModel):
    """SGD halting rule."""
    kind: StoppingKind = StoppingKind.AVG_COST_DIFF
    threshold: float = Field(..., gt=0.0)
    window: int = Field(default=25, ge=2, description="Trailing cost window (AvgCostDiff only)")
    cost_source: CostSource = CostSource.MINIBATCH


class MlpArchitecture(BaseModel):
    """Fully connected ReLU network with a softmax cross-entropy head."""
    layer_sizes: list[int] = Field(default_factory=lambda: [784, 500, 300, 10], min_length=2)

    @field_validator("layer_sizes")
    @classmethod
    def _check_sizes(cls, sizes: list[int]) -> list[int]:
        if any(size < 1 for size in sizes):
            raise ValueError(f"Layer sizes must be positive: {sizes}")
        return sizes

    @property
    def n_classes(self) -> int:
        return self.layer_sizes[-1]


# =============================================================================
# EXPERIMENT MODELS
# =============================================================================

class ExperimentConfig(BaseModel):
    """Full description of one halting-time experiment."""
    experiment_id: str = Field(..., min_length=1)
    algorithm: Algorithm
    ensemble: str

    # Dimensions
    n: Optional[int] = Field(default=None, ge=1)
    m: Optional[int] = Field(default=None, ge=1)
    layer_sizes: Optional[list[int]] = None
    samples: Optional[int] = Field(default=None, ge=1)

    # Halting parameters
    eps: Optional[float] = Field(default=None, gt=0.0)
    max_iter: Optional[int] = Field(default=None, ge=1)
    eta: Optional[float] = Field(default=None, gt=0.0)
    gradient_norm: Optional[GradientNorm] = None
    match_coupling_scale: Optional[bool] = None
    batch_size: Optional[int] = Field(default=None, ge=1)
    learning_rate: Optional[float] = Field(default=None, gt=0.0)
    stopping: Optional[StoppingRule] = None
    cap: Optional[int] = Field(default=None, ge=1)
    eval_samples: Optional[int] = Field(default=None, ge=0)
    record_history: bool = False

    # MNIST inputs
    train_images_path: Optional[str] = None
    train_labels_path: Optional[str] = None
    test_images_path: Optional[str] = None
    test_labels_path: Optional[str] = None

    # Execution
    trials: int = Field(..., ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    threads: Optional[int] = Field(default=None, ge=1, description="None means auto")
    output_dir: Optional[str] = None

    @model_validator(mode="after")
    def _fill_algorithm_defaults(self) -> "ExperimentConfig":
        from config.settings import get_settings

        settings = get_settings()
        kind = parse_ensemble(self.algorithm, self.ensemble)
        self.ensemble = kind.value

        if self.algorithm == Algorithm.CG:
            if self.n is None:
                raise ValueError("CG experiments require n")
            if self.m is None:
                self.m = inner_dimension(self.n, settings.cg.inner_scaling)
            if self.m < self.n:
                raise ValueError(f"Inner dimension m={self.m} must be at least n={self.n}")
            if self.eps is None:
                self.eps = settings.cg.eps
            if self.max_iter is None:
                self.max_iter = settings.cg.max_iter_factor * self.n

        elif self.algorithm == Algorithm.SPIN_GLASS:
            if self.n is None:
                self.n = settings.spin_glass.n
            if self.n < 2:
                raise ValueError("Spin glass experiments require n >= 2")
            if self.eta is None:
                self.eta = settings.spin_glass.eta
            if self.eps is None:
                self.eps = settings.spin_glass.eps
            if self.max_iter is None:
                self.max_iter = settings.spin_glass.max_iter
            if self.gradient_norm is None:
                self.gradient_norm = GradientNorm(settings.spin_glass.gradient_norm)
            if self.match_coupling_scale is None:
                self.match_coupling_scale = settings.spin_glass.match_coupling_scale

        else:
            defaults = settings.deep_net
            if self.layer_sizes is None:
                self.layer_sizes = list(defaults.layer_sizes)
            MlpArchitecture(layer_sizes=self.layer_sizes)
            if self.samples is None:
                self.samples = defaults.samples
            if self.batch_size is None:
                self.batch_size = defaults.batch_size
            if self.batch_size > self.samples:
                raise ValueError(
                    f"batch_size={self.batch_size} exceeds samples={self.samples}"
                )
            if self.learning_rate is None:
                self.learning_rate = defaults.learning_rate
            if self.stopping is None:
                self.stopping = StoppingRule(threshold=defaults.threshold, window=defaults.window)
            if self.cap is None:
                self.cap = defaults.cap
            if self.eval_samples is None:
                self.eval_samples = defaults.eval_samples

        return self

    @property
    def ensemble_kind(self) -> Enum:
        return parse_ensemble(self.algorithm, self.ensemble)


class TrialRecord(BaseModel):
    """Outcome of a single trial."""
    experiment_id: str
    trial_index: int = Field(..., ge=0)
    halting_time: int = Field(..., ge=0)
    converged: bool
    # Final residual norm / energy per spin / training cost
    final_value: float
    wall_time_ms: int = 0
    diagnostics: dict[str, float] = Field(default_factory=dict)
    # Residual norms, energies or monitored costs per iteration (record_history only)
    history: Optional[list[float]] = None
    error: Optional[str] = None


# =============================================================================
# STATISTICS MODELS
# =============================================================================

class MomentSummary(BaseModel):
    """First four moments of a sample (population convention, non-excess kurtosis)."""
    count: int
    mean: float
    std: float = Field(..., ge=0.0)
    skewness: float
    kurtosis: float


class HistogramSpec(BaseModel):
    """Histogram binning; range None means the sample's own min/max."""
    bin_count: int = Field(default=40, ge=1)
    range: Optional[tuple[float, float]] = None

    @model_validator(mode="after")
    def _check_range(self) -> "HistogramSpec":
        if self.range is not None:
            lo, hi = self.range
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
                raise ValueError(f"Invalid histogram range: {self.range}")
        return self


class ReferenceRow(BaseModel):
    """Published halting-time moments for one model/ensemble pair."""
    model: str
    ensemble: str
    mean: float
    std: float
    skewness: float
    kurtosis: float


class SummaryReport(BaseModel):
    """Moments of one experiment plus censoring and reference deltas."""
    experiment_id: str
    model: str
    ensemble: str
    moments: MomentSummary
    total_trials: int
    converged_trials: int
    censored_fraction: float
    reference: Optional[ReferenceRow] = None
    deltas: dict[str, float] = Field(default_factory=dict)


class ComparisonReport(BaseModel):
    """Two-sample comparison of normalized halting-time fluctuations."""
    label_a: str
    label_b: str
    count_a: int
    count_b: int
    ks_distance: float = Field(..., ge=0.0, le=1.0)
    critical_value: float
    alpha: float
    skewness_delta: float
    kurtosis_delta: float
    verdict: Literal["universal", "non-universal"]


def inner_dimension(n: int, c: float = 2.0) -> int:
    """
    Inner dimension M = N + c * floor(sqrt(N)); c = 2 gives the N + 2 floor(sqrt N) regime.

    Args:
        n: System dimension N
        c: Scaling constant (c = 0 gives M = N)

    Returns:
        The inner dimension M
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if c < 0:
        raise ValueError(f"c must be nonnegative, got {c}")
    return n + int(math.floor(c * math.isqrt(n)))


# =============================================================================
# RUN LOG MODELS
# =============================================================================

class RunEvent(BaseModel):
    """One entry in an experiment's event trail."""
    id: str = Field(default_factory=lambda: str(uuid.uuid4()))
    experiment_id: str
    event: str  # "started", "trial_flagged", "completed", ...
    trial_index: Optional[int] = None
    details: dict[str, Any] = Field(default_factory=dict)
    timestamp: datetime = Field(default_factory=datetime.now)
