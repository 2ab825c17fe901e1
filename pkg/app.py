"""
Halting-Time Universality Lab

A Streamlit viewer for experiment output directories written by cli.py:
moment tables against the published rows, normalized fluctuation
histograms and pairwise ensemble comparisons.

Run with: streamlit run app.py
"""

import itertools
from pathlib import Path

import streamlit as st

from config.settings import get_settings
from components.histogram_plot import render_fluctuation_histogram
from components.moment_table import render_moment_summary, render_moment_table
from core.harness import (
    InsufficientTrialsError,
    compare_ensembles,
    converged_halting_times,
    ensemble_label,
    find_reference,
    model_label,
    summarize,
)
from core.stats import DegenerateSampleError, normalize_fluctuations
from core.storage import ResultsStore
from exports import create_comparison_table

# Configure page
st.set_page_config(
    page_title="Halting-Time Universality Lab",
    page_icon="⏱️",
    layout="wide",
    initial_sidebar_state="expanded",
)


@st.cache_data(show_spinner=False)
def load_experiment(base_path: str, experiment_id: str):
    """Records, config and derived statistics of one experiment."""
    store = ResultsStore(base_path)
    records = store.load_records(experiment_id)
    config = store.load_config(experiment_id)
    if config is not None:
        model, ensemble = model_label(config), ensemble_label(config)
    else:
        model, ensemble = experiment_id, experiment_id
    report = summarize(records, reference=find_reference(model, ensemble), model=model, ensemble=ensemble)
    normalized = normalize_fluctuations(converged_halting_times(records))
    return report, normalized


def main():
    """Main application entry point."""
    settings = get_settings()
    st.title("⏱️ Halting-Time Universality Lab")

    with st.sidebar:
        st.markdown("### Results directory")
        base_path = st.text_input("Output directory", value=settings.storage.output_dir)
        bin_count = st.slider("Histogram bins", min_value=10, max_value=100, value=settings.harness.hist_bins)
        show_references = st.checkbox("Gaussian / Gumbel curves", value=True)
        alpha = st.select_slider("KS level", options=[0.001, 0.01, 0.05, 0.1], value=settings.harness.ks_alpha)

    if not Path(base_path).is_dir():
        st.info(f"No results at `{base_path}`. Run an experiment with `python cli.py run-cg ...` first.")
        return

    experiments = ResultsStore(base_path).list_experiments()
    if not experiments:
        st.info("No experiments found.")
        return

    labels = {
        e["id"]: f"{e['id']} ({e['algorithm'] or '?'}, {e['converged']}/{e['trials']} converged)"
        for e in experiments
    }
    selected = st.multiselect(
        "Experiments",
        options=list(labels),
        default=list(labels)[:3],
        format_func=lambda k: labels[k],
    )

    reports, samples = [], {}
    for experiment_id in selected:
        try:
            report, normalized = load_experiment(base_path, experiment_id)
        except (InsufficientTrialsError, DegenerateSampleError) as e:
            st.warning(f"{experiment_id}: {e}")
            continue
        reports.append(report)
        samples[experiment_id] = normalized

    render_moment_table(reports)

    if len(reports) == 1:
        render_moment_summary(reports[0])

    st.markdown("### Fluctuations")
    render_fluctuation_histogram(samples, bin_count=bin_count, show_references=show_references)

    if len(samples) >= 2:
        st.markdown("### Pairwise comparison")
        comparisons = [
            compare_ensembles(samples[a], samples[b], alpha=alpha, label_a=a, label_b=b)
            for a, b in itertools.combinations(samples, 2)
        ]
        st.dataframe(create_comparison_table(comparisons), use_container_width=True, hide_index=True)


if __name__ == "__main__":
    main()
