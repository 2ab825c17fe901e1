"""UI components for the halting-time results viewer."""

from .moment_table import render_moment_summary, render_moment_table
from .histogram_plot import render_fluctuation_histogram

__all__ = [
    "render_moment_summary",
    "render_moment_table",
    "render_fluctuation_histogram",
]
