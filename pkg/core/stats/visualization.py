"""Fluctuation figures.

Overlaid histograms of normalized halting times with the Gaussian and the
standardized Gumbel density drawn for reference.
"""

from typing import Optional

import numpy as np

from ..storage.models import HistogramSpec
from .density import histogram
from .moments import NormalizedSample
from .reference import gaussian_pdf, gumbel_standardized_pdf

# Colors for successive ensembles on one figure
SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]

REFERENCE_STYLES = {
    "Gaussian": {"color": "black", "linestyle": "--"},
    "Gumbel": {"color": "grey", "linestyle": ":"},
}


class FluctuationPlot:
    """Overlay of normalized halting-time histograms."""

    def __init__(
        self,
        samples: dict[str, NormalizedSample],
        spec: Optional[HistogramSpec] = None,
        title: str = "Halting time fluctuations",
    ):
        """
        Initialize fluctuation plot.

        Args:
            samples: Normalized samples keyed by ensemble label
            spec: Histogram binning; defaults to 40 bins on [-4, 4]
            title: Figure title
        """
        self.samples = samples
        self.spec = spec or HistogramSpec(bin_count=40, range=(-4.0, 4.0))
        self.title = title

    def _grid(self) -> np.ndarray:
        if self.spec.range is not None:
            lo, hi = self.spec.range
        else:
            values = np.concatenate([s.values for s in self.samples.values()])
            lo, hi = float(values.min()), float(values.max())
        return np.linspace(lo, hi, 400)

    def create_matplotlib_figure(self, show_references: bool = True):
        """
        Create a Matplotlib figure.

        Args:
            show_references: Draw the Gaussian and Gumbel densities

        Returns:
            Matplotlib Figure object
        """
        try:
            import matplotlib
            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
        except ImportError:
            raise ImportError("matplotlib is required. Install with: pip install matplotlib")

        fig, ax = plt.subplots(figsize=(7, 4.5))
        if not self.samples:
            ax.text(0.5, 0.5, "No data", ha="center", va="center")
            return fig

        for i, (label, sample) in enumerate(self.samples.items()):
            bins = histogram(sample.values, self.spec)
            centers = np.array([c for c, _ in bins])
            densities = np.array([d for _, d in bins])
            width = centers[1] - centers[0] if len(centers) > 1 else 1.0
            ax.bar(
                centers, densities, width=width, alpha=0.35,
                color=SERIES_COLORS[i % len(SERIES_COLORS)],
                edgecolor=SERIES_COLORS[i % len(SERIES_COLORS)],
                label=f"{label} (n={len(sample)})",
            )

        if show_references:
            grid = self._grid()
            ax.plot(grid, gaussian_pdf(grid), label="Gaussian", **REFERENCE_STYLES["Gaussian"])
            ax.plot(grid, gumbel_standardized_pdf(grid), label="Gumbel (standardized)", **REFERENCE_STYLES["Gumbel"])

        ax.set_xlabel("(T - E[T]) / sd(T)")
        ax.set_ylabel("density")
        ax.set_title(self.title)
        ax.legend(frameon=False, fontsize=8)
        fig.tight_layout()
        return fig

    def save(self, path: str, show_references: bool = True) -> str:
        """Render to a PNG file and return its path."""
        import matplotlib.pyplot as plt

        fig = self.create_matplotlib_figure(show_references=show_references)
        fig.savefig(path, dpi=120)
        plt.close(fig)
        return str(path)
