"""Reference curves for the two fluctuation classes: Gaussian-like and Gumbel-like."""

from typing import Sequence

import numpy as np
from scipy import stats as sps

from .moments import moments

_GUMBEL_SKEW, _GUMBEL_EXCESS_KURTOSIS = sps.gumbel_r.stats(moments="sk")

# ~1.1395 and 5.4
GUMBEL_SKEWNESS = float(_GUMBEL_SKEW)
GUMBEL_KURTOSIS = float(_GUMBEL_EXCESS_KURTOSIS) + 3.0


def gumbel_fit(sample: Sequence[float] | np.ndarray) -> tuple[float, float]:
    """
    Method-of-moments Gumbel fit.

    scale = std * sqrt(6) / pi, location = mean - euler_gamma * scale.

    Args:
        sample: Non-degenerate sample

    Returns:
        Tuple of (location, scale)
    """
    summary = moments(sample)
    scale = summary.std * np.sqrt(6.0) / np.pi
    location = summary.mean - np.euler_gamma * scale
    return float(location), float(scale)


def gumbel_standardized_pdf(grid: Sequence[float] | np.ndarray) -> np.ndarray:
    """Density of the Gumbel law rescaled to mean 0 and variance 1."""
    location, scale = -np.euler_gamma * np.sqrt(6.0) / np.pi, np.sqrt(6.0) / np.pi
    return sps.gumbel_r.pdf(np.asarray(grid, dtype=np.float64), loc=location, scale=scale)


def gaussian_pdf(grid: Sequence[float] | np.ndarray) -> np.ndarray:
    """Standard normal density."""
    return sps.norm.pdf(np.asarray(grid, dtype=np.float64))
