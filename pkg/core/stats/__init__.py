"""Fluctuation statistics: moments, normalization, densities, two-sample comparison."""

from .moments import (
    DegenerateSampleError,
    NormalizedSample,
    moments,
    normalize_fluctuations,
)
from .density import histogram, kde, silverman_bandwidth
from .comparison import ks_distance, ks_critical_value
from .visualization import FluctuationPlot
from .reference import (
    gumbel_fit,
    gumbel_standardized_pdf,
    gaussian_pdf,
    GUMBEL_SKEWNESS,
    GUMBEL_KURTOSIS,
)

__all__ = [
    "DegenerateSampleError",
    "NormalizedSample",
    "moments",
    "normalize_fluctuations",
    "histogram",
    "kde",
    "silverman_bandwidth",
    "ks_distance",
    "ks_critical_value",
    "gumbel_fit",
    "gumbel_standardized_pdf",
    "gaussian_pdf",
    "GUMBEL_SKEWNESS",
    "GUMBEL_KURTOSIS",
    "FluctuationPlot",
]
