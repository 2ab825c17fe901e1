"""Tabular exports for halting-time analyses.

summary.csv mirrors the published moment table; hist.csv and normalized.csv
carry the data behind the fluctuation figures.
"""

import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from core.stats import NormalizedSample
from core.storage.models import SummaryReport, ComparisonReport

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["model", "ensemble", "count", "mean", "std", "skewness", "kurtosis"]
HISTOGRAM_COLUMNS = ["bin_center", "density"]


def create_summary_table(reports: Sequence[SummaryReport]) -> pd.DataFrame:
    """
    One row per report with the published-table columns.

    Args:
        reports: Summary reports

    Returns:
        DataFrame with SUMMARY_COLUMNS
    """
    rows = [
        {
            "model": r.model,
            "ensemble": r.ensemble,
            "count": r.moments.count,
            "mean": r.moments.mean,
            "std": r.moments.std,
            "skewness": r.moments.skewness,
            "kurtosis": r.moments.kurtosis,
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def create_reference_table(reports: Sequence[SummaryReport]) -> pd.DataFrame:
    """Measured moments side by side with the reference row and deltas."""
    rows = []
    for r in reports:
        row = {
            "Model": r.model,
            "Ensemble": r.ensemble,
            "Trials": r.total_trials,
            "Censored": r.censored_fraction,
            "Mean": r.moments.mean,
            "St.dev": r.moments.std,
            "Skewness": r.moments.skewness,
            "Kurtosis": r.moments.kurtosis,
        }
        if r.reference is not None:
            row.update({
                "Ref. mean": r.reference.mean,
                "Ref. st.dev": r.reference.std,
                "Ref. skewness": r.reference.skewness,
                "Ref. kurtosis": r.reference.kurtosis,
            })
            row.update({f"Δ {k}": v for k, v in r.deltas.items()})
        rows.append(row)
    return pd.DataFrame(rows)


def create_comparison_table(reports: Sequence[ComparisonReport]) -> pd.DataFrame:
    """One row per pairwise comparison."""
    return pd.DataFrame([r.model_dump() for r in reports])


def export_summary_csv(reports: Sequence[SummaryReport], path: Path | str) -> str:
    """Write summary.csv."""
    create_summary_table(reports).to_csv(path, index=False, lineterminator="\n")
    return str(path)


def export_histogram_csv(bins: Sequence[tuple[float, float]], path: Path | str) -> str:
    """Write hist.csv (bin_center,density)."""
    pd.DataFrame(list(bins), columns=HISTOGRAM_COLUMNS).to_csv(path, index=False, lineterminator="\n")
    return str(path)


def export_normalized_csv(sample: NormalizedSample, path: Path | str) -> str:
    """Write normalized.csv with one value per line and no header."""
    pd.Series(sample.values).to_csv(path, index=False, header=False, lineterminator="\n")
    return str(path)


def import_normalized_csv(path: Path | str) -> NormalizedSample:
    """Read a normalized.csv file back."""
    values = pd.read_csv(path, header=None, float_precision="round_trip").iloc[:, 0]
    return NormalizedSample(values=values.to_numpy(dtype=np.float64))


def import_summary_csv(path: Path | str) -> pd.DataFrame:
    """Read a summary.csv file back."""
    return pd.read_csv(path, float_precision="round_trip")


def export_comparison_csv(reports: Sequence[ComparisonReport], path: Path | str) -> str:
    """Write comparison.csv."""
    create_comparison_table(reports).to_csv(path, index=False, lineterminator="\n")
    return str(path)


def export_fluctuation_figure(
    samples: dict[str, NormalizedSample],
    path: Path | str,
    title: Optional[str] = None,
) -> Optional[str]:
    """
    Render fluctuations.png; returns None when matplotlib is unavailable.

    Args:
        samples: Normalized samples keyed by label
        path: Output PNG path
        title: Optional figure title

    Returns:
        Path of the written file, or None
    """
    try:
        from core.stats.visualization import FluctuationPlot
        plot = FluctuationPlot(samples, title=title or "Halting time fluctuations")
        return plot.save(str(path))
    except ImportError as e:
        logger.warning(f"Skipping figure: {e}")
        return None
