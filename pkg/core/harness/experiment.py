"""Experiment orchestration: parallel trials, summaries and ensemble comparison."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats as sps
from tqdm import tqdm

from config.presets import REFERENCE_ROWS
from config.settings import get_settings
from ..ensembles import trial_stream
from ..stats import NormalizedSample, moments, ks_distance, ks_critical_value
from ..storage.models import (
    ExperimentConfig,
    TrialRecord,
    ReferenceRow,
    SummaryReport,
    ComparisonReport,
)
from ..stats.moments import MIN_MOMENT_COUNT
from ..storage.run_logger import RunLogger
from .runners import BaseTrialRunner, get_trial_runner

logger = logging.getLogger(__name__)


class TrialFailureError(Exception):
    """Raised when too many trials were flagged."""
    def __init__(self, flagged: int, total: int, limit: float):
        self.flagged = flagged
        self.total = total
        self.limit = limit
        super().__init__(
            f"{flagged} of {total} trials flagged ({flagged / total:.1%}), "
            f"allowed fraction is {limit:.1%}"
        )


class InsufficientTrialsError(ValueError):
    """Raised when too few converged trials remain for moment statistics."""
    def __init__(self, converged: int, required: int = MIN_MOMENT_COUNT):
        self.converged = converged
        self.required = required
        super().__init__(f"Only {converged} converged trials, need at least {required}")


# =============================================================================
# EXECUTION
# =============================================================================

def run_experiment(
    config: ExperimentConfig,
    progress_callback: Optional[Callable[[int, int, str], None]] = None,
    show_progress: Optional[bool] = None,
    run_logger: Optional[RunLogger] = None,
    runner: Optional[BaseTrialRunner] = None,
) -> list[TrialRecord]:
    """
    Run every trial of an experiment on a thread pool.

    Trial i draws from trial_stream(seed, i), so the records do not depend on
    the thread count or on which other trials run. Exceptions inside a trial
    are logged and recorded as flagged.

    Args:
        config: Validated experiment configuration
        progress_callback: Optional callback(current, total, status)
        show_progress: tqdm bar on stderr; defaults to the harness setting
        run_logger: Optional event trail
        runner: Pre-built runner (defaults to get_trial_runner(config))

    Returns:
        Exactly config.trials records sorted by trial_index
    """
    settings = get_settings()
    if runner is None:
        runner = get_trial_runner(config)
    runner.prepare()

    threads = max(1, min(config.threads or settings.harness.threads, config.trials))
    record_wall_time = settings.harness.record_wall_time
    if show_progress is None:
        show_progress = settings.harness.show_progress

    logger.info(
        f"Starting experiment {config.experiment_id}: {config.algorithm.value}/{config.ensemble}, "
        f"{config.trials} trials on {threads} threads"
    )
    if run_logger:
        run_logger.log_event(config.experiment_id, "started", details={
            "algorithm": config.algorithm.value,
            "ensemble": config.ensemble,
            "trials": config.trials,
            "threads": threads,
            "seed": config.seed,
        })

    def _run_one(trial_index: int) -> TrialRecord:
        rng = trial_stream(config.seed, trial_index)
        start = time.perf_counter()
        try:
            record = runner.run_trial(trial_index, rng)
        except Exception as e:
            logger.error(f"Trial {trial_index} of {config.experiment_id} raised: {e}")
            record = runner.failed_record(trial_index, str(e))
        if record_wall_time:
            elapsed = int(round((time.perf_counter() - start) * 1000))
            record = record.model_copy(update={"wall_time_ms": elapsed})
        return record

    records: list[TrialRecord] = []
    total = config.trials
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_run_one, i) for i in range(total)]
        bar = tqdm(as_completed(futures), total=total, desc=config.experiment_id,
                   disable=not show_progress, leave=False)
        for done, future in enumerate(bar, start=1):
            record = future.result()
            records.append(record)
            if not record.converged:
                logger.warning(
                    f"Trial {record.trial_index} flagged: {record.error} "
                    f"(halting_time={record.halting_time})"
                )
                if run_logger:
                    run_logger.log_event(config.experiment_id, "trial_flagged",
                                         trial_index=record.trial_index,
                                         details={"error": record.error, "halting_time": record.halting_time})
            if progress_callback:
                progress_callback(done, total, f"Trial {record.trial_index} done")

    records.sort(key=lambda r: r.trial_index)
    flagged = sum(1 for r in records if not r.converged)
    logger.info(f"Finished {config.experiment_id}: {total - flagged}/{total} converged")
    if run_logger:
        run_logger.log_event(config.experiment_id, "completed",
                             details={"converged": total - flagged, "flagged": flagged})
    return records


def check_flagged_fraction(records: Sequence[TrialRecord], limit: Optional[float] = None) -> float:
    """
    Fraction of non-converged trials; raises TrialFailureError above the limit.

    Args:
        records: Trial records
        limit: Allowed fraction; defaults to the harness setting

    Returns:
        The flagged fraction
    """
    if limit is None:
        limit = get_settings().harness.max_flagged_fraction
    total = len(records)
    if total == 0:
        return 0.0
    flagged = sum(1 for r in records if not r.converged)
    fraction = flagged / total
    if fraction > limit:
        raise TrialFailureError(flagged, total, limit)
    return fraction


# =============================================================================
# ANALYSIS
# =============================================================================

def converged_halting_times(records: Sequence[TrialRecord], include_flagged: bool = False) -> np.ndarray:
    """Halting times of converged trials (all trials with include_flagged)."""
    return np.array(
        [r.halting_time for r in records if include_flagged or r.converged],
        dtype=np.float64,
    )


def find_reference(model: str, ensemble: str) -> Optional[ReferenceRow]:
    """Published reference row for a model/ensemble pair, if any."""
    for row in REFERENCE_ROWS:
        if row["model"] == model and row["ensemble"].lower() == ensemble.lower():
            return ReferenceRow(**row)
    return None


def summarize(
    records: Sequence[TrialRecord],
    reference: Optional[ReferenceRow] = None,
    model: str = "",
    ensemble: str = "",
    include_flagged: bool = False,
) -> SummaryReport:
    """
    Moments of the halting times with censoring and reference deltas.

    Args:
        records: Trial records of one experiment
        reference: Optional published row to compare against
        model: Row label for the algorithm/regime
        ensemble: Row label for the ensemble
        include_flagged: Use non-converged trials too

    Returns:
        SummaryReport
    """
    if not records:
        raise InsufficientTrialsError(0)
    times = converged_halting_times(records, include_flagged=include_flagged)
    if times.size < MIN_MOMENT_COUNT:
        raise InsufficientTrialsError(int(times.size))

    summary = moments(times)
    converged = sum(1 for r in records if r.converged)
    deltas = {}
    if reference is not None:
        deltas = {
            "mean": summary.mean - reference.mean,
            "std": summary.std - reference.std,
            "skewness": summary.skewness - reference.skewness,
            "kurtosis": summary.kurtosis - reference.kurtosis,
        }

    return SummaryReport(
        experiment_id=records[0].experiment_id,
        model=model,
        ensemble=ensemble,
        moments=summary,
        total_trials=len(records),
        converged_trials=converged,
        censored_fraction=1.0 - converged / len(records),
        reference=reference,
        deltas=deltas,
    )


def compare_ensembles(
    sample_a: NormalizedSample | Sequence[float],
    sample_b: NormalizedSample | Sequence[float],
    alpha: Optional[float] = None,
    label_a: str = "a",
    label_b: str = "b",
) -> ComparisonReport:
    """
    Two-sample comparison of normalized fluctuations.

    The verdict is "universal" when the KS distance is below the critical
    value for the two sample sizes at level alpha.

    Args:
        sample_a: First normalized sample
        sample_b: Second normalized sample
        alpha: Significance level; defaults to the harness setting
        label_a: Name of the first sample
        label_b: Name of the second sample

    Returns:
        ComparisonReport
    """
    a = np.asarray(getattr(sample_a, "values", sample_a), dtype=np.float64).ravel()
    b = np.asarray(getattr(sample_b, "values", sample_b), dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("Cannot compare empty samples")
    if alpha is None:
        alpha = get_settings().harness.ks_alpha

    distance = ks_distance(a, b)
    critical = ks_critical_value(a.size, b.size, alpha)
    skew_a, skew_b = sps.skew(a, bias=True), sps.skew(b, bias=True)
    kurt_a = sps.kurtosis(a, fisher=False, bias=True)
    kurt_b = sps.kurtosis(b, fisher=False, bias=True)

    return ComparisonReport(
        label_a=label_a,
        label_b=label_b,
        count_a=int(a.size),
        count_b=int(b.size),
        ks_distance=distance,
        critical_value=critical,
        alpha=alpha,
        skewness_delta=float(abs(skew_a - skew_b)),
        kurtosis_delta=float(abs(kurt_a - kurt_b)),
        verdict="universal" if distance < critical else "non-universal",
    )


