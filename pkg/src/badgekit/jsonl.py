"""Line-delimited JSON serialization for the domain records.

All writers use canonical formatting (sorted keys, compact separators) so
identical data always produces identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

from .pipeline import SpeakingEvent, VolumeSample
from .proximity import ProximityObservation


def dumps_canonical(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_jsonl(path: Path, records: Iterable[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(dumps_canonical(rec))
            fh.write("\n")


def read_jsonl(path: Path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


def volume_to_dict(v: VolumeSample) -> dict:
    return {"participant_id": v.participant_id, "ts": v.ts, "value": v.value}


def volume_from_dict(doc: dict) -> VolumeSample:
    return VolumeSample(doc["participant_id"], doc["ts"], doc["value"])


def event_to_dict(e: SpeakingEvent) -> dict:
    return {"participant_id": e.participant_id, "start_ts": e.start_ts, "end_ts": e.end_ts}


def event_from_dict(doc: dict) -> SpeakingEvent:
    return SpeakingEvent(doc["participant_id"], doc["start_ts"], doc["end_ts"])


def observation_to_dict(o: ProximityObservation) -> dict:
    return {
        "scanner_id": o.scanner_id,
        "beacon_id": o.beacon_id,
        "rssi_dbm": o.rssi_dbm,
        "ts": o.ts,
    }


def observation_from_dict(doc: dict) -> ProximityObservation:
    return ProximityObservation(
        doc["scanner_id"], doc["beacon_id"], doc["rssi_dbm"], doc["ts"]
    )
