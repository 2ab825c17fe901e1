"""Pilot-run calibration of halting thresholds.

The spin-glass gradient threshold and the SGD stopping threshold are not
given in closed form, and the CG residual threshold depends on how b and A
are scaled; each is chosen so the mean halting time lands near a target. Larger thresholds halt earlier, so a bisection in log space over the
threshold converges on the target mean.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

from ..storage.models import Algorithm, ExperimentConfig
from .experiment import run_experiment, converged_halting_times
from .runners import BaseTrialRunner, ConfigurationError, get_trial_runner

logger = logging.getLogger(__name__)


@dataclass
class CalibrationResult:
    """Outcome of a threshold search."""
    threshold: float
    mean_halting_time: float
    target: float
    pilot_trials: int
    history: list[tuple[float, float]] = field(default_factory=list)  # (threshold, mean)

    @property
    def relative_error(self) -> float:
        return abs(self.mean_halting_time - self.target) / self.target


def current_threshold(config: ExperimentConfig) -> float:
    """The threshold a config halts on."""
    if config.algorithm in (Algorithm.CG, Algorithm.SPIN_GLASS):
        return config.eps
    if config.algorithm == Algorithm.DEEP_NET:
        return config.stopping.threshold
    raise ConfigurationError(f"No calibratable threshold for {config.algorithm}", field="algorithm")


def with_threshold(config: ExperimentConfig, threshold: float) -> ExperimentConfig:
    """Copy of a config with its halting threshold replaced."""
    if config.algorithm in (Algorithm.CG, Algorithm.SPIN_GLASS):
        return config.model_copy(update={"eps": threshold})
    if config.algorithm == Algorithm.DEEP_NET:
        stopping = config.stopping.model_copy(update={"threshold": threshold})
        return config.model_copy(update={"stopping": stopping})
    raise ConfigurationError(f"No calibratable threshold for {config.algorithm}", field="algorithm")


def _pilot_mean(config: ExperimentConfig, runner: Optional[BaseTrialRunner]) -> float:
    records = run_experiment(config, show_progress=False, runner=runner)
    times = converged_halting_times(records)
    # Too few converged trials means the threshold is too strict
    if times.size < max(1, len(records) // 2):
        return math.inf
    return float(times.mean())


def calibrate_threshold(
    config: ExperimentConfig,
    target_mean: float,
    pilot_trials: int = 50,
    lower: Optional[float] = None,
    upper: Optional[float] = None,
    iterations: int = 12,
    rtol: float = 0.05,
) -> CalibrationResult:
    """
    Bisect the halting threshold until the pilot mean halting time hits a target.

    Args:
        config: Base experiment (cg, spin_glass or deep_net)
        target_mean: Desired mean halting time
        pilot_trials: Trials per pilot run
        lower: Smallest threshold tried; defaults to current / 100
        upper: Largest threshold tried; defaults to current * 100
        iterations: Maximum number of bisection steps
        rtol: Stop once the mean is within this relative distance of the target

    Returns:
        CalibrationResult with the best threshold seen
    """
    if target_mean <= 0:
        raise ValueError(f"target_mean must be positive, got {target_mean}")
    start = current_threshold(config)
    lo = lower if lower is not None else start / 100.0
    hi = upper if upper is not None else start * 100.0
    if not 0.0 < lo < hi:
        raise ValueError(f"Invalid threshold bracket [{lo}, {hi}]")

    base = config.model_copy(update={"trials": pilot_trials})
    runner = None
    if config.algorithm == Algorithm.DEEP_NET:
        # Load MNIST once for every pilot run
        runner = get_trial_runner(base)
        runner.prepare()

    history: list[tuple[float, float]] = []
    best = (start, math.inf)
    for step in range(iterations):
        mid = math.sqrt(lo * hi)
        pilot = with_threshold(base, mid)
        if runner is not None:
            runner.config = pilot
        mean = _pilot_mean(pilot, runner)
        history.append((mid, mean))
        logger.info(f"Calibration step {step + 1}: threshold={mid:.6g}, mean halting time={mean:.1f}")

        if abs(mean - target_mean) < abs(best[1] - target_mean):
            best = (mid, mean)
        if math.isfinite(mean) and abs(mean - target_mean) <= rtol * target_mean:
            break
        if mean > target_mean:
            lo = mid
        else:
            hi = mid

    return CalibrationResult(
        threshold=best[0],
        mean_halting_time=best[1],
        target=target_mean,
        pilot_trials=pilot_trials,
        history=history,
    )
