"""Append-only JSONL store with an in-memory time index.

Layout under the data directory:

    registry.json
    <group_id>/volumes.jsonl
    <group_id>/events.jsonl
    <group_id>/scans.jsonl
    <group_id>/chunk_index.jsonl   # ingested (badge_id, seq) pairs, for dedup

Records are durably appended (write + flush + fsync) before they become
visible to readers. One writer per group segment; readers always see a
prefix of the written sequence.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from typing import Iterable, Optional

from ..jsonl import dumps_canonical, read_jsonl

KINDS = ("volumes", "events", "scans", "chunk_index")
DATA_DIR_ENV = "OPENBADGE_DATA_DIR"


def resolve_data_dir(explicit: Optional[str] = None, default: str = "./data") -> Path:
    """Precedence: explicit argument > OPENBADGE_DATA_DIR > default."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(DATA_DIR_ENV)
    return Path(env) if env else Path(default)


class Store:
    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._records: dict[tuple[str, str], list[dict]] = {}
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._load()

    def _segment_path(self, group_id: str, kind: str) -> Path:
        return self.data_dir / group_id / f"{kind}.jsonl"

    def _load(self) -> None:
        if not self.data_dir.exists():
            return
        for group_dir in sorted(self.data_dir.iterdir()):
            if not group_dir.is_dir():
                continue
            for kind in KINDS:
                path = group_dir / f"{kind}.jsonl"
                if path.exists():
                    self._records[(group_dir.name, kind)] = list(read_jsonl(path))

    def _lock(self, key: tuple[str, str]) -> threading.Lock:
        return self._locks.setdefault(key, threading.Lock())

    def append(self, group_id: str, kind: str, records: Iterable[dict]) -> int:
        if kind not in KINDS:
            raise ValueError(f"unknown segment kind {kind!r}")
        records = list(records)
        if not records:
            return 0
        key = (group_id, kind)
        with self._lock(key):
            path = self._segment_path(group_id, kind)
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "a", encoding="utf-8") as fh:
                for rec in records:
                    fh.write(dumps_canonical(rec))
                    fh.write("\n")
                fh.flush()
                os.fsync(fh.fileno())
            # visible only after the durable append above
            self._records.setdefault(key, []).extend(records)
        return len(records)

    def records(self, group_id: str, kind: str) -> list[dict]:
        return list(self._records.get((group_id, kind), []))

    def groups(self) -> list[str]:
        return sorted({g for (g, _) in self._records})

    def query_points(
        self, group_id: str, kind: str, from_ts: int, to_ts: int
    ) -> list[dict]:
        """Point records (volumes, scans) with ts in [from_ts, to_ts)."""
        return [
            r
            for r in self._records.get((group_id, kind), [])
            if from_ts <= r["ts"] < to_ts
        ]

    def query_events(self, group_id: str, from_ts: int, to_ts: int) -> list[dict]:
        """Events intersecting [from_ts, to_ts)."""
        return [
            r
            for r in self._records.get((group_id, "events"), [])
            if r["start_ts"] < to_ts and r["end_ts"] > from_ts
        ]

    def ingested_chunk_keys(self, group_id: str) -> set[tuple[str, int]]:
        return {
            (r["badge_id"], r["seq"])
            for r in self._records.get((group_id, "chunk_index"), [])
        }
