"""BLE RSSI proximity: distance estimation and per-window proximity graphs.

Uses the log-distance path-loss model. Parameters are conventional defaults
(rssi_at_1m = -59 dBm, exponent 2.0), configurable per deployment.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Protocol, Sequence

from .errors import ConfigurationError
from .metrics import TimeWindow

DEFAULT_RSSI_AT_1M = -59.0
DEFAULT_PATH_LOSS_EXPONENT = 2.0
DEFAULT_MIN_OBSERVATIONS = 2


@dataclass(frozen=True)
class ProximityObservation:
    """One RSSI reading of one beacon by one scanner."""

    scanner_id: str
    beacon_id: str
    rssi_dbm: int
    ts: int

    def __post_init__(self):
        if not -120 <= self.rssi_dbm <= 0:
            raise ValueError(f"rssi out of range: {self.rssi_dbm}")
        if self.scanner_id == self.beacon_id:
            raise ValueError("a scanner cannot observe itself")


@dataclass(frozen=True)
class PathLossParams:
    rssi_at_1m: float = DEFAULT_RSSI_AT_1M
    exponent: float = DEFAULT_PATH_LOSS_EXPONENT

    def __post_init__(self):
        if not 1.0 <= self.exponent <= 6.0:
            raise ConfigurationError("path-loss exponent must be in [1, 6]")
        if not -100.0 <= self.rssi_at_1m <= -20.0:
            raise ConfigurationError("rssi_at_1m must be in [-100, -20] dBm")


@dataclass(frozen=True)
class ProximityEdge:
    a: str
    b: str
    median_rssi: float
    est_distance_m: float


@dataclass(frozen=True)
class ProximityGraph:
    window: TimeWindow
    nodes: tuple[str, ...]
    edges: tuple[ProximityEdge, ...]

    def as_dict(self) -> dict:
        return {
            "window": {"start_ts": self.window.start_ts, "end_ts": self.window.end_ts},
            "nodes": list(self.nodes),
            "edges": [
                {
                    "a": e.a,
                    "b": e.b,
                    "median_rssi": e.median_rssi,
                    "est_distance_m": e.est_distance_m,
                }
                for e in self.edges
            ],
        }


class GroupLookup(Protocol):
    def group_of(self, device_id: str) -> Optional[str]: ...


def estimate_distance(rssi_dbm: float, params: PathLossParams = PathLossParams()) -> float:
    """Log-distance inversion: d = 10^((rssi_at_1m - rssi) / (10 n))."""
    return 10.0 ** ((params.rssi_at_1m - rssi_dbm) / (10.0 * params.exponent))


def filter_to_group(
    observations: Iterable[ProximityObservation], registry: GroupLookup
) -> list[ProximityObservation]:
    """Keep only same-group scanner/beacon pairs; unknown ids are dropped."""
    kept = []
    for obs in observations:
        g1 = registry.group_of(obs.scanner_id)
        g2 = registry.group_of(obs.beacon_id)
        if g1 is not None and g1 == g2:
            kept.append(obs)
    return kept


def build_graph(
    observations: Iterable[ProximityObservation],
    window: TimeWindow,
    params: PathLossParams = PathLossParams(),
    min_obs: int = DEFAULT_MIN_OBSERVATIONS,
) -> ProximityGraph:
    """Undirected graph: one edge per pair with >= min_obs in-window observations.

    Observations pool across scan directions; edge RSSI is the pooled median.
    """
    by_pair: dict[tuple[str, str], list[int]] = {}
    nodes: set[str] = set()
    for obs in observations:
        if not window.start_ts <= obs.ts < window.end_ts:
            continue
        pair = tuple(sorted((obs.scanner_id, obs.beacon_id)))
        by_pair.setdefault(pair, []).append(obs.rssi_dbm)
        nodes.update(pair)
    edges = []
    for (a, b), rssis in sorted(by_pair.items()):
        if len(rssis) < min_obs:
            continue
        med = float(statistics.median(rssis))
        edges.append(
            ProximityEdge(a, b, med, estimate_distance(med, params))
        )
    return ProximityGraph(window, tuple(sorted(nodes)), tuple(edges))
