"""Hub core: time sync, pull protocol driver, and ingest.

The hub clock is ground truth; badges are corrected toward it. Ingest is
exactly-once per (badge_id, seq) no matter how often a pull is retried.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Protocol, Sequence

from ..errors import BadgeUnreachableError, ProtocolError
from ..jsonl import event_to_dict, observation_to_dict, volume_to_dict
from ..pipeline import PipelineConfig, VolumeSample, process_volume_series
from ..proximity import ProximityObservation, filter_to_group
from ..simulator import SampleChunk
from .registry import GroupRegistry
from .store import Store

DEFAULT_PULL_PERIOD_S = 60.0
DEFAULT_SYNC_RTT_MS = 10


@dataclass
class PullCursor:
    badge_id: str
    last_acked_seq: int = -1


@dataclass
class IngestReport:
    accepted_chunks: int = 0
    duplicate_chunks: int = 0
    unknown_badge_records: int = 0
    malformed_records: int = 0
    volumes_appended: int = 0
    events_appended: int = 0
    scans_appended: int = 0
    scans_filtered_out: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class BadgePeer(Protocol):
    """What the hub needs from a badge: clock reads, pulls, acks."""

    badge_id: str

    def clock(self, hub_true_ts: int) -> int: ...
    def adopt_offset(self, offset_ms: int) -> None: ...
    def pull(self, after_seq: int) -> list[SampleChunk]: ...
    def ack(self, seq: int) -> None: ...
    @property
    def max_seq(self) -> int: ...


def sync_time(
    badge: BadgePeer,
    hub_now_ms: Optional[int] = None,
    rtt_ms: int = DEFAULT_SYNC_RTT_MS,
) -> int:
    """Measure and apply the badge's clock offset; returns the offset in ms.

    The badge samples its clock mid-flight; the hub timestamps the exchange
    at its midpoint, so the residual skew after sync is at most rtt/2 plus
    drift accumulated since.
    """
    if hub_now_ms is None:
        hub_now_ms = int(time.time() * 1000)
    try:
        badge_reading = badge.clock(hub_now_ms + rtt_ms // 2)
    except ConnectionError as exc:
        raise BadgeUnreachableError(str(exc)) from exc
    hub_midpoint = hub_now_ms + rtt_ms // 2
    offset = hub_midpoint - badge_reading
    badge.adopt_offset(offset)
    return offset


def pull(badge: BadgePeer, cursor: PullCursor) -> tuple[list[SampleChunk], PullCursor]:
    """Fetch chunks past the cursor. Idempotent until the caller acks."""
    if cursor.badge_id != badge.badge_id:
        raise ProtocolError("cursor does not belong to this badge")
    if cursor.last_acked_seq > badge.max_seq:
        raise ProtocolError(
            f"cursor seq {cursor.last_acked_seq} ahead of badge seq {badge.max_seq}"
        )
    try:
        chunks = badge.pull(cursor.last_acked_seq)
    except ConnectionError as exc:
        raise BadgeUnreachableError(str(exc)) from exc
    return chunks, cursor


def ack(badge: BadgePeer, cursor: PullCursor, upto_seq: int) -> PullCursor:
    """Acknowledge receipt; frees badge flash and advances the cursor."""
    try:
        badge.ack(upto_seq)
    except ConnectionError as exc:
        raise BadgeUnreachableError(str(exc)) from exc
    cursor.last_acked_seq = max(cursor.last_acked_seq, upto_seq)
    return cursor


def _chunk_volume_series(chunks: Sequence[SampleChunk]) -> list[list[VolumeSample]]:
    """Group contiguous chunks of one badge into uninterrupted volume series."""
    series: list[list[VolumeSample]] = []
    current: list[VolumeSample] = []
    prev_end: Optional[int] = None
    for chunk in sorted(chunks, key=lambda c: c.seq):
        contiguous = prev_end is not None and abs(chunk.start_ts - prev_end) <= chunk.period_ms
        if not contiguous and current:
            series.append(current)
            current = []
        for i, v in enumerate(chunk.values):
            current.append(
                VolumeSample(
                    participant_id=chunk.badge_id,
                    ts=chunk.start_ts + i * chunk.period_ms,
                    value=min(max(float(v), 0.0), 1.0),
                )
            )
        prev_end = chunk.start_ts + chunk.duration_ms
    if current:
        series.append(current)
    return series


class Hub:
    def __init__(
        self,
        store: Store,
        registry: GroupRegistry,
        pipeline_cfg: PipelineConfig = PipelineConfig(),
    ):
        self.store = store
        self.registry = registry
        self.pipeline_cfg = pipeline_cfg
        self.cursors: dict[str, PullCursor] = {}

    def cursor_for(self, badge_id: str) -> PullCursor:
        return self.cursors.setdefault(badge_id, PullCursor(badge_id))

    def collect(self, badge: BadgePeer) -> IngestReport:
        """One pull/ingest/ack round against a badge."""
        cursor = self.cursor_for(badge.badge_id)
        chunks, _ = pull(badge, cursor)
        report = self.ingest_chunks(chunks)
        if chunks:
            ack(badge, cursor, max(c.seq for c in chunks))
        return report

    def ingest_chunks(self, chunks: Iterable[SampleChunk]) -> IngestReport:
        """Append volumes and derived speaking events; dedup by (badge_id, seq)."""
        report = IngestReport()
        by_group: dict[str, list[SampleChunk]] = {}
        for chunk in chunks:
            participant = self.registry.participant_for(chunk.badge_id)
            if participant is None:
                report.unknown_badge_records += 1
                continue
            group_id = self.registry.group_of(chunk.badge_id)
            if (chunk.badge_id, chunk.seq) in self.store.ingested_chunk_keys(group_id):
                report.duplicate_chunks += 1
                continue
            by_group.setdefault(group_id, []).append(chunk)

        for group_id, group_chunks in by_group.items():
            seen: set[tuple[str, int]] = set()
            fresh: list[SampleChunk] = []
            for chunk in group_chunks:
                key = (chunk.badge_id, chunk.seq)
                if key in seen:
                    report.duplicate_chunks += 1
                    continue
                seen.add(key)
                fresh.append(chunk)

            by_badge: dict[str, list[SampleChunk]] = {}
            for chunk in fresh:
                by_badge.setdefault(chunk.badge_id, []).append(chunk)

            volume_records: list[dict] = []
            event_records: list[dict] = []
            for badge_id, badge_chunks in sorted(by_badge.items()):
                participant = self.registry.participant_for(badge_id)
                for series in _chunk_volume_series(badge_chunks):
                    relabeled = [
                        VolumeSample(participant.participant_id, s.ts, s.value)
                        for s in series
                    ]
                    volume_records.extend(volume_to_dict(s) for s in relabeled)
                    events = process_volume_series(relabeled, self.pipeline_cfg)
                    event_records.extend(event_to_dict(e) for e in events)

            self.store.append(group_id, "volumes", volume_records)
            self.store.append(group_id, "events", event_records)
            self.store.append(
                group_id,
                "chunk_index",
                [{"badge_id": c.badge_id, "seq": c.seq} for c in fresh],
            )
            report.accepted_chunks += len(fresh)
            report.volumes_appended += len(volume_records)
            report.events_appended += len(event_records)
        return report

    def ingest_scans(self, observations: Iterable[ProximityObservation]) -> IngestReport:
        """Group-filter scans and append them to their group segment."""
        report = IngestReport()
        observations = list(observations)
        known = []
        for obs in observations:
            if (
                self.registry.group_of(obs.scanner_id) is None
                or self.registry.group_of(obs.beacon_id) is None
            ):
                report.unknown_badge_records += 1
            else:
                known.append(obs)
        kept = filter_to_group(known, self.registry)
        report.scans_filtered_out = len(known) - len(kept)
        by_group: dict[str, list[dict]] = {}
        for obs in kept:
            gid = self.registry.group_of(obs.scanner_id)
            by_group.setdefault(gid, []).append(observation_to_dict(obs))
        for gid, records in by_group.items():
            self.store.append(gid, "scans", records)
            report.scans_appended += len(records)
        return report
