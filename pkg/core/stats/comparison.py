"""Two-sample Kolmogorov-Smirnov distance and critical values."""

import math
from typing import Sequence

import numpy as np
from scipy import stats as sps
from scipy.special import kolmogi


def ks_distance(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    """
    Supremum of |F_a - F_b| over the merged support of two empirical CDFs.

    Args:
        a: First sample (nonempty)
        b: Second sample (nonempty)

    Returns:
        Distance in [0, 1]
    """
    a = np.asarray(getattr(a, "values", a), dtype=np.float64).ravel()
    b = np.asarray(getattr(b, "values", b), dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("KS distance needs two nonempty samples")
    return float(sps.ks_2samp(a, b, method="asymp").statistic)


def ks_critical_value(n: int, m: int, alpha: float = 0.01) -> float:
    """
    Asymptotic two-sample KS critical value c(alpha) * sqrt((n + m) / (n m)).

    Args:
        n: First sample size
        m: Second sample size
        alpha: Significance level

    Returns:
        Distance above which equality of the laws is rejected at level alpha
    """
    if n < 1 or m < 1:
        raise ValueError(f"Sample sizes must be positive, got {n} and {m}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return float(kolmogi(alpha)) * math.sqrt((n + m) / (n * m))
