"""Export functionality for halting-time analyses."""

from .table_exporters import (
    SUMMARY_COLUMNS,
    HISTOGRAM_COLUMNS,
    create_summary_table,
    create_reference_table,
    create_comparison_table,
    export_summary_csv,
    export_histogram_csv,
    export_normalized_csv,
    export_comparison_csv,
    export_fluctuation_figure,
    import_normalized_csv,
    import_summary_csv,
)

__all__ = [
    "SUMMARY_COLUMNS",
    "HISTOGRAM_COLUMNS",
    "create_summary_table",
    "create_reference_table",
    "create_comparison_table",
    "export_summary_csv",
    "export_histogram_csv",
    "export_normalized_csv",
    "export_comparison_csv",
    "export_fluctuation_figure",
    "import_normalized_csv",
    "import_summary_csv",
]
