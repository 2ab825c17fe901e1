"""Fluctuation histogram components for Streamlit."""

import streamlit as st

from core.stats import NormalizedSample
from core.storage.models import HistogramSpec


def render_fluctuation_histogram(
    samples: dict[str, NormalizedSample],
    bin_count: int = 40,
    show_references: bool = True,
) -> None:
    """
    Render overlaid normalized histograms with reference densities.

    Args:
        samples: Normalized samples keyed by label
        bin_count: Number of bins on [-4, 4]
        show_references: Draw the Gaussian and Gumbel curves
    """
    if not samples:
        st.info("Select at least one experiment.")
        return

    try:
        from core.stats.visualization import FluctuationPlot
        import matplotlib.pyplot as plt
    except ImportError:
        st.error("matplotlib is required for histograms. Install with: pip install matplotlib")
        return

    plot = FluctuationPlot(samples, spec=HistogramSpec(bin_count=bin_count, range=(-4.0, 4.0)))
    fig = plot.create_matplotlib_figure(show_references=show_references)
    st.pyplot(fig)
    plt.close(fig)
