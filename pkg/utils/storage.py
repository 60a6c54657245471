# utils/storage.py
"""Run records as JSON lines, with recovery of finished batches."""
import json
import subprocess
from dataclasses import dataclass, field
from datetime import datetime
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

SCHEMA_VERSION = 1


@lru_cache(maxsize=1)
def build_id() -> str:
    """`git describe --always --dirty` of the source tree, or "unknown"."""
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=5, cwd=Path(__file__).resolve().parent,
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() if out.returncode == 0 and out.stdout.strip() else "unknown"


@dataclass
class RunRecord:
    """One self-contained output line."""
    subcommand: str
    config: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    kind: str = "result"
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())
    build: str = field(default_factory=build_id)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "timestamp": self.timestamp,
            "subcommand": self.subcommand,
            "kind": self.kind,
            "build": self.build,
            "config": self.config,
            "results": self.results,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class RunStorage:
    """Manages the records directory of simulate runs."""

    def __init__(self, storage_dir: str = "data", records_file: str = "runs.jsonl"):
        self.storage_dir = Path(storage_dir)
        self.records_file = records_file

    def configure(self, storage_dir: Optional[str] = None, records_file: Optional[str] = None):
        if storage_dir:
            self.storage_dir = Path(storage_dir)
        if records_file:
            self.records_file = records_file

    @property
    def default_path(self) -> Path:
        return self.storage_dir / self.records_file

    def append_record(self, record: RunRecord, path: Optional[Union[str, Path]] = None) -> Path:
        """Append one JSON line and flush it."""
        target = Path(path) if path else self.default_path
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, 'a') as f:
            f.write(record.to_json() + '\n')
            f.flush()
        return target

    def load_records(self, path: Optional[Union[str, Path]] = None) -> List[Dict[str, Any]]:
        """All parseable records; a torn last line from an interrupted run is skipped."""
        target = Path(path) if path else self.default_path
        if not target.exists():
            return []
        records = []
        with open(target, 'r') as f:
            for line in f:
                if line.strip():
                    try:
                        records.append(json.loads(line))
                    except json.JSONDecodeError:
                        continue
        return records

    def completed_batches(self, fingerprint: str,
                          path: Optional[Union[str, Path]] = None) -> Dict[int, Dict[str, Any]]:
        """Batch payloads already written for the run with this fingerprint."""
        done = {}
        for rec in self.load_records(path):
            if rec.get("kind") != "batch" or rec.get("schema_version") != SCHEMA_VERSION:
                continue
            results = rec.get("results", {})
            if results.get("fingerprint") != fingerprint:
                continue
            done[int(results["batch"])] = results["accumulators"]
        return done

    def final_record(self, path: Union[str, Path], subcommand: Optional[str] = None) -> Optional[Dict[str, Any]]:
        """Last non-batch record, optionally of one subcommand."""
        for rec in reversed(self.load_records(path)):
            if rec.get("kind") == "batch":
                continue
            if subcommand is None or rec.get("subcommand") == subcommand:
                return rec
        return None


storage = RunStorage()
