"""Experiment result storage on the local filesystem."""

import json
import logging
import shutil
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from .models import ExperimentConfig, TrialRecord

logger = logging.getLogger(__name__)

RECORD_COLUMNS = [
    "experiment_id",
    "trial_index",
    "halting_time",
    "converged",
    "final_value",
    "wall_time_ms",
]

CONFIG_FILE = "config.json"
RECORDS_FILE = "records.csv"
DIAGNOSTICS_FILE = "diagnostics.csv"
HISTORY_FILE = "history.csv"
EVENTS_FILE = "events.jsonl"


def records_to_dataframe(records: Sequence[TrialRecord]) -> pd.DataFrame:
    """Records as a DataFrame with the records.csv columns, sorted by trial_index."""
    rows = [r.model_dump(include=set(RECORD_COLUMNS)) for r in records]
    df = pd.DataFrame(rows, columns=RECORD_COLUMNS)
    return df.sort_values("trial_index", kind="stable").reset_index(drop=True)


def diagnostics_to_dataframe(records: Sequence[TrialRecord]) -> pd.DataFrame:
    """Per-trial diagnostics keyed by trial_index, plus the error flag."""
    rows = []
    for r in sorted(records, key=lambda rec: rec.trial_index):
        row = {"trial_index": r.trial_index, "error": r.error or ""}
        row.update(r.diagnostics)
        rows.append(row)
    df = pd.DataFrame(rows)
    if df.empty:
        return pd.DataFrame(columns=["trial_index", "error"])
    extra = sorted(c for c in df.columns if c not in ("trial_index", "error"))
    return df[["trial_index", "error", *extra]]


def history_to_dataframe(records: Sequence[TrialRecord]) -> pd.DataFrame:
    """Per-iteration histories in long form: trial_index, step, value."""
    rows = [
        (r.trial_index, step, value)
        for r in sorted(records, key=lambda rec: rec.trial_index)
        if r.history is not None
        for step, value in enumerate(r.history)
    ]
    return pd.DataFrame(rows, columns=["trial_index", "step", "value"])


def dataframe_to_records(
    records_df: pd.DataFrame,
    diagnostics_df: Optional[pd.DataFrame] = None,
) -> list[TrialRecord]:
    """Rebuild TrialRecords from records.csv (and optionally diagnostics.csv) frames."""
    extras: dict[int, dict] = {}
    if diagnostics_df is not None and not diagnostics_df.empty:
        for row in diagnostics_df.to_dict(orient="records"):
            index = int(row.pop("trial_index"))
            error = row.pop("error", "")
            extras[index] = {
                "error": error if isinstance(error, str) and error else None,
                "diagnostics": {k: float(v) for k, v in row.items()},
            }

    records = []
    for row in records_df.to_dict(orient="records"):
        index = int(row["trial_index"])
        records.append(TrialRecord(
            experiment_id=str(row["experiment_id"]),
            trial_index=index,
            halting_time=int(row["halting_time"]),
            converged=bool(row["converged"]),
            final_value=float(row["final_value"]),
            wall_time_ms=int(row["wall_time_ms"]),
            **extras.get(index, {}),
        ))
    return records


class ResultsStore:
    """Manage experiment output directories and their files."""

    def __init__(self, base_path: Path | str):
        """
        Initialize results store.

        Args:
            base_path: Base directory holding one sub-directory per experiment
        """
        self.base_path = Path(base_path)
        self.base_path.mkdir(parents=True, exist_ok=True)

    def get_experiment_path(self, experiment_id: str) -> Path:
        """Get the directory path for an experiment."""
        return self.base_path / experiment_id

    def _ensure_path(self, experiment_id: str) -> Path:
        path = self.get_experiment_path(experiment_id)
        path.mkdir(parents=True, exist_ok=True)
        return path

    def events_path(self, experiment_id: str) -> Path:
        return self._ensure_path(experiment_id) / EVENTS_FILE

    # =========================================================================
    # CONFIG
    # =========================================================================

    def save_config(self, config: ExperimentConfig) -> Path:
        """Write config.json for an experiment."""
        path = self._ensure_path(config.experiment_id) / CONFIG_FILE
        path.write_text(config.model_dump_json(indent=2), encoding="utf-8")
        return path

    def load_config(self, experiment_id: str) -> Optional[ExperimentConfig]:
        """Read config.json back, or None when absent."""
        path = self.get_experiment_path(experiment_id) / CONFIG_FILE
        if not path.exists():
            return None
        return ExperimentConfig.model_validate_json(path.read_text(encoding="utf-8"))

    # =========================================================================
    # RECORDS
    # =========================================================================

    def save_records(self, experiment_id: str, records: Sequence[TrialRecord]) -> Path:
        """
        Write records.csv and diagnostics.csv, plus history.csv when any record carries a history.

        Args:
            experiment_id: Experiment identifier
            records: Trial records (any order)

        Returns:
            Path of records.csv
        """
        path = self._ensure_path(experiment_id)
        records_path = path / RECORDS_FILE
        records_to_dataframe(records).to_csv(records_path, index=False, lineterminator="\n")
        diagnostics_to_dataframe(records).to_csv(path / DIAGNOSTICS_FILE, index=False, lineterminator="\n")
        if any(r.history is not None for r in records):
            history_to_dataframe(records).to_csv(path / HISTORY_FILE, index=False, lineterminator="\n")
        logger.info(f"Wrote {len(records)} records to {records_path}")
        return records_path

    def load_records(self, experiment_id: str) -> list[TrialRecord]:
        """
        Read records.csv (and diagnostics.csv when present).

        Args:
            experiment_id: Experiment identifier

        Returns:
            Records sorted by trial_index
        """
        path = self.get_experiment_path(experiment_id)
        records_path = path / RECORDS_FILE
        if not records_path.exists():
            raise FileNotFoundError(f"No records for experiment '{experiment_id}' in {path}")
        records_df = pd.read_csv(records_path, float_precision="round_trip",
                                 dtype={"experiment_id": str})
        diagnostics_df = None
        if (path / DIAGNOSTICS_FILE).exists():
            diagnostics_df = pd.read_csv(path / DIAGNOSTICS_FILE, float_precision="round_trip",
                                         keep_default_na=False, na_values=[""])
            diagnostics_df["error"] = diagnostics_df["error"].fillna("")
        return dataframe_to_records(records_df, diagnostics_df)

    def load_records_from(self, records_path: Path | str) -> list[TrialRecord]:
        """Read records from an explicit records.csv path (diagnostics.csv beside it is used too)."""
        records_path = Path(records_path)
        if records_path.is_dir():
            records_path = records_path / RECORDS_FILE
        store = ResultsStore(records_path.parent.parent)
        return store.load_records(records_path.parent.name)

    # =========================================================================
    # LISTING
    # =========================================================================

    def list_experiments(self) -> list[dict]:
        """
        List stored experiments with basic metadata.

        Returns:
            List of metadata dictionaries sorted by experiment id
        """
        experiments = []
        for experiment_dir in self.base_path.iterdir():
            if not experiment_dir.is_dir() or not (experiment_dir / RECORDS_FILE).exists():
                continue
            try:
                df = pd.read_csv(experiment_dir / RECORDS_FILE)
                meta = {}
                config_path = experiment_dir / CONFIG_FILE
                if config_path.exists():
                    meta = json.loads(config_path.read_text(encoding="utf-8"))
                experiments.append({
                    "id": experiment_dir.name,
                    "algorithm": meta.get("algorithm"),
                    "ensemble": meta.get("ensemble"),
                    "trials": len(df),
                    "converged": int(df["converged"].sum()),
                })
            except Exception as e:
                logger.warning(f"Skipping unreadable experiment {experiment_dir.name}: {e}")

        experiments.sort(key=lambda e: e["id"])
        return experiments

    def delete_experiment(self, experiment_id: str) -> bool:
        """
        Delete an experiment directory.

        Returns:
            True if deleted, False if not found
        """
        path = self.get_experiment_path(experiment_id)
        if path.exists():
            shutil.rmtree(path)
            return True
        return False
