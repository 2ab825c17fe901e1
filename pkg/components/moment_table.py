"""Moment table components for Streamlit."""

from typing import Optional

import streamlit as st

from core.storage.models import SummaryReport
from exports import create_reference_table


def render_moment_summary(report: SummaryReport) -> None:
    """
    Render headline metrics for one experiment.

    Args:
        report: Summary of the experiment
    """
    col1, col2, col3, col4 = st.columns(4)
    ref = report.reference

    with col1:
        st.metric(
            "Mean",
            f"{report.moments.mean:.1f}",
            delta=f"{report.deltas['mean']:+.1f} vs ref." if ref else None,
            delta_color="off",
        )
    with col2:
        st.metric(
            "St.dev",
            f"{report.moments.std:.2f}",
            delta=f"{report.deltas['std']:+.2f} vs ref." if ref else None,
            delta_color="off",
        )
    with col3:
        st.metric("Skewness", f"{report.moments.skewness:.3f}")
    with col4:
        st.metric("Kurtosis", f"{report.moments.kurtosis:.3f}")

    if report.censored_fraction > 0:
        st.warning(
            f"{report.total_trials - report.converged_trials} of {report.total_trials} trials "
            f"did not converge and are excluded ({report.censored_fraction:.1%})"
        )


def render_moment_table(reports: list[SummaryReport], title: Optional[str] = "Halting-time moments") -> None:
    """Render measured moments next to the published reference rows."""
    if title:
        st.markdown(f"### {title}")
    if not reports:
        st.info("No experiments with enough converged trials.")
        return
    df = create_reference_table(reports)
    st.dataframe(df, use_container_width=True, hide_index=True)
