"""Group-interaction statistics and Meeting Mediator state.

Turns are gap-merged clusters of one participant's speaking events; all
statistics are computed over a half-open time window [start_ts, end_ts).
Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ConfigurationError, EmptyInputError
from .pipeline import SpeakingEvent

DEFAULT_TURN_GAP_MS = 1000
DEFAULT_RESPONSE_WINDOW_MS = 2000
DEFAULT_RATE_MAX_PER_MIN = 20.0


@dataclass(frozen=True)
class TimeWindow:
    start_ts: int
    end_ts: int

    def __post_init__(self):
        if self.start_ts >= self.end_ts:
            raise ValueError("window start must precede end")

    @property
    def duration_ms(self) -> int:
        return self.end_ts - self.start_ts


@dataclass(frozen=True)
class Turn:
    """A maximal cluster of one participant's events with gaps <= turn_gap_ms."""

    participant_id: str
    start_ts: int
    end_ts: int


@dataclass(frozen=True)
class TurnMatrix:
    participants: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]  # counts[i][j]: j starts after i ends

    def as_dict(self) -> dict:
        return {
            "participants": list(self.participants),
            "counts": [list(row) for row in self.counts],
        }


@dataclass(frozen=True)
class MetricsConfig:
    turn_gap_ms: int = DEFAULT_TURN_GAP_MS
    response_window_ms: int = DEFAULT_RESPONSE_WINDOW_MS
    rate_max_per_min: float = DEFAULT_RATE_MAX_PER_MIN
    inequality: str = "gini"  # or "entropy"

    def __post_init__(self):
        if self.turn_gap_ms < 0:
            raise ConfigurationError("turn_gap_ms must be nonnegative")
        if self.response_window_ms <= 0:
            raise ConfigurationError("response_window_ms must be positive")
        if self.rate_max_per_min <= 0:
            raise ConfigurationError("rate_max_per_min must be positive")
        if self.inequality not in ("gini", "entropy"):
            raise ConfigurationError(f"unknown inequality measure {self.inequality!r}")


@dataclass(frozen=True)
class WindowStats:
    window: TimeWindow
    speaking_ms: dict
    turns: dict
    turn_rate_per_min: float
    overlap_pct: float
    gini: float
    dominant: Optional[str]

    def as_dict(self) -> dict:
        return {
            "window": {"start_ts": self.window.start_ts, "end_ts": self.window.end_ts},
            "speaking_ms": dict(self.speaking_ms),
            "turns": dict(self.turns),
            "turn_rate_per_min": self.turn_rate_per_min,
            "overlap_pct": self.overlap_pct,
            "gini": self.gini,
            "dominant": self.dominant,
        }


@dataclass(frozen=True)
class MediatorState:
    node_positions: dict  # participant -> (x, y) on the unit circle
    edge_weights: dict  # participant -> turns in window
    ball_xy: tuple[float, float]
    ball_intensity: float

    def as_dict(self) -> dict:
        return {
            "node_positions": {p: list(xy) for p, xy in self.node_positions.items()},
            "edge_weights": dict(self.edge_weights),
            "ball_xy": list(self.ball_xy),
            "ball_intensity": self.ball_intensity,
        }


def _participant_ids(events: Iterable[SpeakingEvent]) -> list[str]:
    return sorted({e.participant_id for e in events})


def cluster_turns(
    events: Sequence[SpeakingEvent], turn_gap_ms: int
) -> list[Turn]:
    """Merge each participant's sorted events into turns."""
    turns: list[Turn] = []
    by_participant: dict[str, list[SpeakingEvent]] = {}
    for e in events:
        by_participant.setdefault(e.participant_id, []).append(e)
    for pid, evs in by_participant.items():
        evs = sorted(evs, key=lambda e: e.start_ts)
        start, end = evs[0].start_ts, evs[0].end_ts
        for e in evs[1:]:
            if e.start_ts - end <= turn_gap_ms:
                end = max(end, e.end_ts)
            else:
                turns.append(Turn(pid, start, end))
                start, end = e.start_ts, e.end_ts
        turns.append(Turn(pid, start, end))
    turns.sort(key=lambda t: (t.start_ts, t.participant_id))
    return turns


def _turns_in_window(turns: Iterable[Turn], window: TimeWindow) -> list[Turn]:
    return [
        t for t in turns if t.start_ts < window.end_ts and t.end_ts > window.start_ts
    ]


def turns_per_participant(
    events: Sequence[SpeakingEvent],
    window: TimeWindow,
    turn_gap_ms: int = DEFAULT_TURN_GAP_MS,
    participants: Optional[Sequence[str]] = None,
) -> dict:
    """Count each participant's turns intersecting the window."""
    pids = list(participants) if participants is not None else _participant_ids(events)
    counts = {p: 0 for p in pids}
    for t in _turns_in_window(cluster_turns(events, turn_gap_ms), window):
        if t.participant_id in counts:
            counts[t.participant_id] += 1
    return counts


def turn_taking_frequency(
    events: Sequence[SpeakingEvent],
    window: TimeWindow,
    turn_gap_ms: int = DEFAULT_TURN_GAP_MS,
) -> float:
    """Group turns per minute over the window."""
    total = sum(turns_per_participant(events, window, turn_gap_ms).values())
    return total / (window.duration_ms / 60000.0)


def response_matrix(
    events: Sequence[SpeakingEvent],
    window: TimeWindow,
    turn_gap_ms: int = DEFAULT_TURN_GAP_MS,
    response_window_ms: int = DEFAULT_RESPONSE_WINDOW_MS,
    participants: Optional[Sequence[str]] = None,
) -> TurnMatrix:
    """counts[i][j]: times j began a turn within response_window_ms after i's turn ended."""
    if response_window_ms <= 0:
        raise ConfigurationError("response_window_ms must be positive")
    pids = list(participants) if participants is not None else _participant_ids(events)
    index = {p: i for i, p in enumerate(pids)}
    turns = [
        t
        for t in _turns_in_window(cluster_turns(events, turn_gap_ms), window)
        if t.participant_id in index
    ]
    counts = [[0] * len(pids) for _ in pids]
    for a in turns:
        for b in turns:
            if a.end_ts < b.start_ts <= a.end_ts + response_window_ms:
                counts[index[a.participant_id]][index[b.participant_id]] += 1
    return TurnMatrix(tuple(pids), tuple(tuple(row) for row in counts))


def _clip(start: int, end: int, window: TimeWindow) -> Optional[tuple[int, int]]:
    s, e = max(start, window.start_ts), min(end, window.end_ts)
    return (s, e) if s < e else None


def speaking_time_ms(
    events: Sequence[SpeakingEvent],
    window: TimeWindow,
    participants: Optional[Sequence[str]] = None,
) -> dict:
    pids = list(participants) if participants is not None else _participant_ids(events)
    totals = {p: 0 for p in pids}
    for e in events:
        if e.participant_id not in totals:
            continue
        clipped = _clip(e.start_ts, e.end_ts, window)
        if clipped:
            totals[e.participant_id] += clipped[1] - clipped[0]
    return totals


def overlap_pct(events: Sequence[SpeakingEvent], window: TimeWindow) -> float:
    """Share (0..100) of the speech timeline with >= 2 simultaneous speakers.

    Timeline time is counted once regardless of how many speakers overlap.
    """
    boundaries: list[tuple[int, int]] = []
    for e in events:
        clipped = _clip(e.start_ts, e.end_ts, window)
        if clipped:
            boundaries.append((clipped[0], +1))
            boundaries.append((clipped[1], -1))
    if not boundaries:
        return 0.0
    boundaries.sort()
    any_ms = 0
    overlap_ms = 0
    active = 0
    prev_ts = boundaries[0][0]
    for ts, delta in boundaries:
        span = ts - prev_ts
        if span > 0:
            if active >= 1:
                any_ms += span
            if active >= 2:
                overlap_ms += span
        active += delta
        prev_ts = ts
    if any_ms == 0:
        return 0.0
    return 100.0 * overlap_ms / any_ms


def gini(speaking_ms: Mapping[str, float] | Sequence[float]) -> float:
    """Gini coefficient of speaking times; 0 when all-zero or perfectly equal."""
    values = (
        list(speaking_ms.values())
        if isinstance(speaking_ms, Mapping)
        else list(speaking_ms)
    )
    if not values:
        raise EmptyInputError("gini requires at least one participant")
    if any(v < 0 for v in values):
        raise ValueError("speaking times must be nonnegative")
    total = float(sum(values))
    if total == 0.0:
        return 0.0
    n = len(values)
    xs = sorted(values)
    # equivalent to sum_i sum_j |xi - xj| / (2 n total), via the sorted form
    weighted = sum((2 * (i + 1) - n - 1) * x for i, x in enumerate(xs))
    return weighted / (n * total)


def normalized_entropy_inequality(speaking_ms: Mapping[str, float]) -> float:
    """Alternate inequality measure: 1 - H(shares)/log(n), in [0,1]."""
    values = list(speaking_ms.values())
    if not values:
        raise EmptyInputError("entropy requires at least one participant")
    total = float(sum(values))
    n = len(values)
    if total == 0.0 or n == 1:
        return 0.0
    shares = [v / total for v in values if v > 0]
    h = -sum(p * math.log(p) for p in shares)
    return 1.0 - h / math.log(n)


def window_stats(
    events: Sequence[SpeakingEvent],
    window: TimeWindow,
    cfg: MetricsConfig = MetricsConfig(),
    participants: Optional[Sequence[str]] = None,
) -> WindowStats:
    """Assemble all per-window statistics."""
    pids = list(participants) if participants is not None else _participant_ids(events)
    speaking = speaking_time_ms(events, window, pids)
    turns = turns_per_participant(events, window, cfg.turn_gap_ms, pids)
    rate = sum(turns.values()) / (window.duration_ms / 60000.0)
    if pids:
        if cfg.inequality == "entropy":
            inequality = normalized_entropy_inequality(speaking)
        else:
            inequality = gini(speaking)
    else:
        inequality = 0.0
    dominant: Optional[str] = None
    if speaking:
        best = max(speaking.values())
        if best > 0:
            leaders = [p for p, v in speaking.items() if v == best]
            dominant = leaders[0] if len(leaders) == 1 else None
    return WindowStats(
        window=window,
        speaking_ms=speaking,
        turns=turns,
        turn_rate_per_min=rate,
        overlap_pct=overlap_pct(events, window),
        gini=inequality,
        dominant=dominant,
    )


def circle_positions(participants: Sequence[str]) -> dict:
    """Nodes uniformly on the unit circle in participant order, first at (1, 0)."""
    n = len(participants)
    return {
        p: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n))
        for i, p in enumerate(participants)
    }


def mediator_state(
    stats: WindowStats, rate_max: float = DEFAULT_RATE_MAX_PER_MIN
) -> MediatorState:
    """Render-ready mediator state: turn-weighted ball over circle nodes."""
    pids = list(stats.turns.keys())
    if len(pids) < 2:
        raise ConfigurationError("mediator needs at least 2 participants")
    if rate_max <= 0:
        raise ConfigurationError("rate_max must be positive")
    positions = circle_positions(pids)
    total_turns = sum(stats.turns.values())
    if total_turns == 0:
        weights = {p: 1.0 / len(pids) for p in pids}
    else:
        weights = {p: stats.turns[p] / total_turns for p in pids}
    x = sum(weights[p] * positions[p][0] for p in pids)
    y = sum(weights[p] * positions[p][1] for p in pids)
    intensity = min(1.0, stats.turn_rate_per_min / rate_max)
    return MediatorState(
        node_positions=positions,
        edge_weights=dict(stats.turns),
        ball_xy=(x, y),
        ball_intensity=intensity,
    )
