"""Append-only event trail for experiment runs."""

import json
import threading
from pathlib import Path
from typing import Any, Optional

from .models import RunEvent


class RunLogger:
    """Log experiment events to a JSON-lines file."""

    def __init__(self, log_path: Path | str):
        """
        Initialize run logger.

        Args:
            log_path: Path of the events.jsonl file (created on first write)
        """
        self.log_path = Path(log_path)
        self.entries: list[RunEvent] = []
        self._lock = threading.Lock()

    def log_event(
        self,
        experiment_id: str,
        event: str,
        trial_index: Optional[int] = None,
        details: Optional[dict[str, Any]] = None,
    ) -> RunEvent:
        """
        Log one event.

        Args:
            experiment_id: Experiment identifier
            event: Event name (e.g. 'started', 'trial_flagged', 'completed')
            trial_index: Optional trial the event refers to
            details: Optional JSON-serializable payload

        Returns:
            The created RunEvent
        """
        entry = RunEvent(
            experiment_id=experiment_id,
            event=event,
            trial_index=trial_index,
            details=details or {},
        )
        with self._lock:
            self.entries.append(entry)
            self._save_entry(entry)
        return entry

    def _save_entry(self, entry: RunEvent) -> None:
        self.log_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.log_path, "a", encoding="utf-8") as f:
            f.write(entry.model_dump_json() + "\n")

    def get_entries(
        self,
        experiment_id: Optional[str] = None,
        event: Optional[str] = None,
    ) -> list[RunEvent]:
        """
        Read entries back from disk with optional filters.

        Args:
            experiment_id: Filter by experiment
            event: Filter by event name

        Returns:
            List of matching RunEvent objects in file order
        """
        if not self.log_path.exists():
            return []
        entries = []
        with open(self.log_path, encoding="utf-8") as f:
            for line in f:
                if not line.strip():
                    continue
                entry = RunEvent.model_validate(json.loads(line))
                if experiment_id and entry.experiment_id != experiment_id:
                    continue
                if event and entry.event != event:
                    continue
                entries.append(entry)
        return entries

    def get_summary(self, experiment_id: Optional[str] = None) -> dict:
        """Counts of events by name."""
        counts: dict[str, int] = {}
        for entry in self.get_entries(experiment_id=experiment_id):
            counts[entry.event] = counts.get(entry.event, 0) + 1
        return counts
