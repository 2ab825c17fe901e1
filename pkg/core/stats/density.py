"""Histogram and kernel density estimates for fluctuation plots."""

from typing import Optional, Sequence

import numpy as np
from scipy import stats as sps

from ..storage.models import HistogramSpec

SILVERMAN_FACTOR = 1.06


def histogram(sample: Sequence[float] | np.ndarray, spec: HistogramSpec) -> list[tuple[float, float]]:
    """
    Density-normalized histogram.

    With an explicit range, values outside it are clipped into the end bins.
    Without one the range is the sample's min/max (a unit interval around a
    constant sample).

    Args:
        sample: Nonempty sample
        spec: Bin count and optional range

    Returns:
        List of (bin_center, density) with sum(density * width) = 1
    """
    values = np.asarray(sample, dtype=np.float64).ravel()
    if values.size == 0:
        raise ValueError("Cannot histogram an empty sample")

    if spec.range is not None:
        lo, hi = spec.range
        values = np.clip(values, lo, hi)
    else:
        lo, hi = float(values.min()), float(values.max())
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5

    counts, edges = np.histogram(values, bins=spec.bin_count, range=(lo, hi))
    widths = np.diff(edges)
    densities = counts / (values.size * widths)
    centers = (edges[:-1] + edges[1:]) / 2.0
    return [(float(c), float(d)) for c, d in zip(centers, densities)]


def silverman_bandwidth(sample: Sequence[float] | np.ndarray) -> float:
    """Rule-of-thumb bandwidth 1.06 * sigma * n^(-1/5)."""
    values = np.asarray(sample, dtype=np.float64).ravel()
    return SILVERMAN_FACTOR * float(np.std(values)) * values.size ** (-0.2)


def kde(
    sample: Sequence[float] | np.ndarray,
    grid: Sequence[float] | np.ndarray,
    bandwidth: Optional[float] = None,
) -> np.ndarray:
    """
    Gaussian-kernel density estimate evaluated on a grid.

    Args:
        sample: Nonempty sample
        grid: Evaluation points
        bandwidth: Kernel width; None selects silverman_bandwidth

    Returns:
        Densities on the grid
    """
    values = np.asarray(sample, dtype=np.float64).ravel()
    if values.size == 0:
        raise ValueError("Cannot estimate a density from an empty sample")
    if bandwidth is None:
        bandwidth = silverman_bandwidth(values)
    if not bandwidth > 0.0:
        raise ValueError(f"Bandwidth must be positive, got {bandwidth}")

    points = np.asarray(grid, dtype=np.float64).ravel()
    kernel = sps.norm.pdf((points[:, None] - values[None, :]) / bandwidth)
    return kernel.mean(axis=1) / bandwidth
