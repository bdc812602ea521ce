"""Deterministic badge simulator.

Generates volume chunks and BLE scan observations from a scripted
conversation. Output is a pure function of (script, configs): the same
seed always produces byte-identical JSONL.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError
from .proximity import PathLossParams, ProximityObservation

HARDWARE_VOLUME_PERIOD_MS = 250
HARDWARE_SCAN_PERIOD_MS = 60_000
HARDWARE_FLASH_CAPACITY_HOURS = 8.0
PHONE_VOLUME_PERIOD_MS = 10
PHONE_SCAN_PERIOD_MS = 10_000

CHUNK_SPAN_MS = 60_000  # one chunk per minute of volume data
SCAN_NOISE_SIGMA_DB = 4.0
SPEECH_NOISE_SIGMA = 0.25  # multiplicative; keeps volume cv well above 0.1
BLEED_AT_1M = 0.1  # cross-talk fraction at 1 m, inverse-square beyond


@dataclass(frozen=True)
class ScriptParticipant:
    id: str
    position_xy_m: tuple[float, float]
    base_volume: float
    speech_intervals: tuple[tuple[int, int], ...]  # script-relative ms

    def __post_init__(self):
        if not 0.0 < self.base_volume <= 1.0:
            raise ConfigurationError("base_volume must be in (0, 1]")
        ivals = sorted(self.speech_intervals)
        for (s, e) in ivals:
            if s >= e:
                raise ConfigurationError("speech interval start must precede end")
        for (_, e1), (s2, _) in zip(ivals, ivals[1:]):
            if s2 < e1:
                raise ConfigurationError("speech intervals must be disjoint")
        object.__setattr__(self, "speech_intervals", tuple(ivals))
        object.__setattr__(self, "position_xy_m", tuple(self.position_xy_m))


@dataclass(frozen=True)
class ConversationScript:
    duration_ms: int
    participants: tuple[ScriptParticipant, ...]
    noise_floor: float = 0.01
    rng_seed: int = 0
    start_ts: int = 0  # hub-truth epoch ms of script start

    def __post_init__(self):
        if self.duration_ms <= 0:
            raise ConfigurationError("duration_ms must be positive")
        if not 0.0 <= self.noise_floor < 1.0:
            raise ConfigurationError("noise_floor must be in [0, 1)")
        for p in self.participants:
            if p.base_volume <= self.noise_floor:
                raise ConfigurationError(
                    f"{p.id}: base_volume must exceed the noise floor"
                )
            for (_, e) in p.speech_intervals:
                if e > self.duration_ms:
                    raise ConfigurationError(f"{p.id}: interval exceeds duration")
        object.__setattr__(self, "participants", tuple(self.participants))

    @classmethod
    def from_dict(cls, doc: dict) -> "ConversationScript":
        return cls(
            duration_ms=doc["duration_ms"],
            participants=tuple(
                ScriptParticipant(
                    id=p["id"],
                    position_xy_m=tuple(p["position_xy_m"]),
                    base_volume=p["base_volume"],
                    speech_intervals=tuple(tuple(iv) for iv in p["speech_intervals"]),
                )
                for p in doc["participants"]
            ),
            noise_floor=doc.get("noise_floor", 0.01),
            rng_seed=doc.get("rng_seed", 0),
            start_ts=doc.get("start_ts", 0),
        )


@dataclass(frozen=True)
class BadgeConfig:
    mode: str = "hardware"  # hardware | phone
    volume_period_ms: Optional[int] = None
    scan_period_ms: Optional[int] = None
    flash_capacity_hours: float = HARDWARE_FLASH_CAPACITY_HOURS
    clock_offset_ms: int = 0
    clock_drift_ppm: float = 20.0
    battery_life_hours: float = 40.0  # metadata only

    def __post_init__(self):
        if self.mode not in ("hardware", "phone"):
            raise ConfigurationError(f"unknown badge mode {self.mode!r}")
        if self.volume_period_ms is None:
            object.__setattr__(
                self,
                "volume_period_ms",
                HARDWARE_VOLUME_PERIOD_MS if self.mode == "hardware" else PHONE_VOLUME_PERIOD_MS,
            )
        if self.scan_period_ms is None:
            object.__setattr__(
                self,
                "scan_period_ms",
                HARDWARE_SCAN_PERIOD_MS if self.mode == "hardware" else PHONE_SCAN_PERIOD_MS,
            )
        if self.volume_period_ms <= 0 or self.scan_period_ms <= 0:
            raise ConfigurationError("sampling periods must be positive")
        if self.mode == "hardware" and self.flash_capacity_hours <= 0:
            raise ConfigurationError("flash capacity must be positive")


@dataclass(frozen=True)
class SampleChunk:
    """One flash-stored block of consecutive volume samples."""

    badge_id: str
    seq: int
    period_ms: int
    start_ts: int  # badge-clock ms
    values: tuple[float, ...]

    @property
    def duration_ms(self) -> int:
        return len(self.values) * self.period_ms

    def as_dict(self) -> dict:
        return {
            "badge_id": self.badge_id,
            "seq": self.seq,
            "period_ms": self.period_ms,
            "start_ts": self.start_ts,
            "values": list(self.values),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SampleChunk":
        return cls(
            badge_id=doc["badge_id"],
            seq=doc["seq"],
            period_ms=doc["period_ms"],
            start_ts=doc["start_ts"],
            values=tuple(doc["values"]),
        )


@dataclass
class SimulationResult:
    chunks: dict  # badge_id -> list[SampleChunk]
    observations: dict  # badge_id -> list[ProximityObservation]


def rssi_from_distance(
    d_m: float, params: PathLossParams = PathLossParams(), noise_db: float = 0.0
) -> float:
    """Forward log-distance model; exact inverse of estimate_distance at zero noise."""
    if d_m <= 0:
        raise ValueError("distance must be positive")
    return params.rssi_at_1m - 10.0 * params.exponent * math.log10(d_m) + noise_db


def flash_store(
    chunks: Sequence[SampleChunk], capacity_hours: float
) -> tuple[list[SampleChunk], int]:
    """Drop-oldest flash policy: keep the newest chunks summing to <= capacity."""
    if capacity_hours <= 0:
        raise ConfigurationError("flash capacity must be positive")
    budget_ms = capacity_hours * 3_600_000
    kept_ms = 0.0
    retained: list[SampleChunk] = []
    ordered = sorted(chunks, key=lambda c: c.seq)
    for chunk in reversed(ordered):
        if kept_ms + chunk.duration_ms > budget_ms:
            break
        kept_ms += chunk.duration_ms
        retained.append(chunk)
    retained.reverse()
    return retained, len(ordered) - len(retained)


def _badge_clock(true_ts: float, script_start: int, cfg: BadgeConfig) -> int:
    elapsed = true_ts - script_start
    return int(round(true_ts + cfg.clock_offset_ms + cfg.clock_drift_ppm * elapsed / 1e6))


def _speaking_mask(participant: ScriptParticipant, rel_ms: np.ndarray) -> np.ndarray:
    mask = np.zeros(rel_ms.shape, dtype=bool)
    for s, e in participant.speech_intervals:
        mask |= (rel_ms >= s) & (rel_ms < e)
    return mask


def simulate(
    script: ConversationScript,
    configs: dict,
    path_loss: PathLossParams = PathLossParams(),
) -> SimulationResult:
    """Run the scripted conversation through every participant's badge.

    ``configs`` maps participant id -> BadgeConfig; one entry per participant.
    Badge ids equal participant ids. All emitted timestamps are in each
    badge's skewed clock.
    """
    ids = [p.id for p in script.participants]
    if set(configs) != set(ids):
        raise ConfigurationError("configs must cover exactly the script participants")

    positions = {p.id: p.position_xy_m for p in script.participants}
    chunks: dict = {}
    observations: dict = {}

    for idx, part in enumerate(script.participants):
        cfg = configs[part.id]
        period = cfg.volume_period_ms
        n_samples = script.duration_ms // period
        vol_rng = np.random.default_rng([script.rng_seed, idx, 0])
        noise_gauss = vol_rng.standard_normal(n_samples)
        noise_floor_u = vol_rng.uniform(0.3, 1.0, n_samples)

        rel = np.arange(n_samples, dtype=np.int64) * period
        speaking = _speaking_mask(part, rel)
        speech_vals = part.base_volume * np.maximum(
            0.0, 1.0 + SPEECH_NOISE_SIGMA * noise_gauss
        )
        silence_vals = script.noise_floor * noise_floor_u
        values = np.where(speaking, speech_vals, silence_vals)
        # cross-talk from other concurrent speakers, inverse-square in distance
        for other in script.participants:
            if other.id == part.id:
                continue
            dx = positions[part.id][0] - positions[other.id][0]
            dy = positions[part.id][1] - positions[other.id][1]
            d2 = max(dx * dx + dy * dy, 1.0)
            values += _speaking_mask(other, rel) * (BLEED_AT_1M * other.base_volume / d2)
        values = np.clip(values, 0.0, 1.0)

        badge_chunks: list[SampleChunk] = []
        samples_per_chunk = max(1, CHUNK_SPAN_MS // period)
        seq = 0
        for lo in range(0, n_samples, samples_per_chunk):
            block = values[lo : lo + samples_per_chunk]
            true_start = script.start_ts + lo * period
            badge_chunks.append(
                SampleChunk(
                    badge_id=part.id,
                    seq=seq,
                    period_ms=period,
                    start_ts=_badge_clock(true_start, script.start_ts, cfg),
                    values=tuple(float(v) for v in block),
                )
            )
            seq += 1
        chunks[part.id] = badge_chunks

        scan_rng = np.random.default_rng([script.rng_seed, idx, 1])
        badge_obs: list[ProximityObservation] = []
        scan_origin = _badge_clock(script.start_ts, script.start_ts, cfg)
        k = 1
        while True:
            # true instant at which the badge's clock reads the k-th multiple
            true_scan = script.start_ts + k * cfg.scan_period_ms / (
                1.0 + cfg.clock_drift_ppm / 1e6
            )
            if true_scan > script.start_ts + script.duration_ms:
                break
            emitted_ts = scan_origin + k * cfg.scan_period_ms
            for other in script.participants:
                if other.id == part.id:
                    continue
                dx = positions[part.id][0] - positions[other.id][0]
                dy = positions[part.id][1] - positions[other.id][1]
                d = max(math.hypot(dx, dy), 0.1)
                rssi = rssi_from_distance(
                    d, path_loss, noise_db=SCAN_NOISE_SIGMA_DB * scan_rng.standard_normal()
                )
                badge_obs.append(
                    ProximityObservation(
                        scanner_id=part.id,
                        beacon_id=other.id,
                        rssi_dbm=int(min(0, max(-120, round(rssi)))),
                        ts=emitted_ts,
                    )
                )
            k += 1
        observations[part.id] = badge_obs

    return SimulationResult(chunks=chunks, observations=observations)


class SimulatedBadge:
    """A pull-protocol peer over simulated flash storage.

    Holds a badge's generated chunks, applies the drop-oldest flash policy
    over the not-yet-acked backlog, and tracks the clock offset adopted from
    time sync. ``reachable`` supports fault-injection tests.
    """

    def __init__(
        self,
        badge_id: str,
        chunks: Sequence[SampleChunk],
        cfg: BadgeConfig,
        script_start: int = 0,
    ):
        self.badge_id = badge_id
        self.cfg = cfg
        self.script_start = script_start
        self._all_chunks = sorted(chunks, key=lambda c: c.seq)
        self._acked_seq = -1
        self._sync_offset_ms = 0
        self.reachable = True
        self.overflowed_total = 0

    def clock(self, hub_true_ts: int) -> int:
        """Badge clock reading at a given hub-truth instant."""
        skewed = _badge_clock(hub_true_ts, self.script_start, self.cfg)
        return skewed + self._sync_offset_ms

    def adopt_offset(self, offset_ms: int) -> None:
        self._sync_offset_ms += offset_ms

    @property
    def max_seq(self) -> int:
        return self._all_chunks[-1].seq if self._all_chunks else -1

    def retained(self) -> list[SampleChunk]:
        backlog = [c for c in self._all_chunks if c.seq > self._acked_seq]
        kept, overflowed = flash_store(backlog, self.cfg.flash_capacity_hours)
        return kept

    def pull(self, after_seq: int) -> list[SampleChunk]:
        if not self.reachable:
            raise ConnectionError(f"badge {self.badge_id} unreachable")
        return [c for c in self.retained() if c.seq > after_seq]

    def ack(self, seq: int) -> None:
        if not self.reachable:
            raise ConnectionError(f"badge {self.badge_id} unreachable")
        # frees flash occupancy up to and including seq
        retained_before = [c for c in self._all_chunks if c.seq > self._acked_seq]
        _, overflowed = flash_store(retained_before, self.cfg.flash_capacity_hours)
        self.overflowed_total = max(self.overflowed_total, overflowed)
        self._acked_seq = max(self._acked_seq, seq)
