"""Moment estimators and fluctuation normalization.

All moments use the population convention (divide by the count). Kurtosis
is reported non-excess, so a Gaussian gives 3.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as sps

from ..storage.models import MomentSummary

MIN_MOMENT_COUNT = 4


class DegenerateSampleError(ValueError):
    """Raised when a sample has zero variance."""
    def __init__(self, count: int, value: float):
        self.count = count
        self.value = value
        super().__init__(f"Sample of {count} values is degenerate (all equal to {value})")


@dataclass(frozen=True)
class NormalizedSample:
    """Halting times centered by their mean and scaled by their standard deviation."""
    values: np.ndarray

    def __len__(self) -> int:
        return self.values.shape[0]


def _as_array(sample: Sequence[float] | np.ndarray) -> np.ndarray:
    values = np.asarray(sample, dtype=np.float64).ravel()
    if values.size == 0:
        raise ValueError("Sample is empty")
    if not np.all(np.isfinite(values)):
        raise ValueError("Sample contains non-finite values")
    return values


def _check_variance(values: np.ndarray) -> None:
    if np.all(values == values[0]):
        raise DegenerateSampleError(values.size, float(values[0]))


def moments(sample: Sequence[float] | np.ndarray) -> MomentSummary:
    """
    Mean, population standard deviation, skewness m3/m2^(3/2) and kurtosis m4/m2^2.

    Args:
        sample: At least four values, not all equal

    Returns:
        MomentSummary
    """
    values = _as_array(sample)
    if values.size < MIN_MOMENT_COUNT:
        raise ValueError(f"Need at least {MIN_MOMENT_COUNT} values, got {values.size}")
    _check_variance(values)

    return MomentSummary(
        count=int(values.size),
        mean=float(np.mean(values)),
        std=float(np.std(values)),
        skewness=float(sps.skew(values, bias=True)),
        kurtosis=float(sps.kurtosis(values, fisher=False, bias=True)),
    )


def normalize_fluctuations(sample: Sequence[float] | np.ndarray) -> NormalizedSample:
    """
    Center by the sample mean and divide by the population standard deviation.

    Args:
        sample: Non-degenerate sample

    Returns:
        NormalizedSample with mean 0 and variance 1
    """
    values = _as_array(sample)
    _check_variance(values)
    return NormalizedSample(values=sps.zscore(values, ddof=0))
