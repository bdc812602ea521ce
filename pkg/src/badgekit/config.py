"""Key-value config file support with flag > env > file > default precedence."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .errors import ConfigurationError
from .metrics import MetricsConfig
from .pipeline import PipelineConfig
from .proximity import PathLossParams


@dataclass(frozen=True)
class AppConfig:
    port: int = 8400
    pull_period_s: float = 60.0
    data_dir: Optional[str] = None
    # pipeline
    band_lo_hz: float = 100.0
    band_hi_hz: float = 3900.0
    median_window: int = 5
    speak_threshold: float = 0.05
    min_event_ms: int = 500
    max_gap_ms: int = 300
    modulation_cv_min: float = 0.1
    # metrics
    turn_gap_ms: int = 1000
    response_window_ms: int = 2000
    rate_max_per_min: float = 20.0
    inequality: str = "gini"
    # path loss
    rssi_at_1m: float = -59.0
    path_loss_exponent: float = 2.0
    min_obs: int = 2

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(
            band_lo_hz=self.band_lo_hz,
            band_hi_hz=self.band_hi_hz,
            median_window=self.median_window,
            speak_threshold=self.speak_threshold,
            min_event_ms=self.min_event_ms,
            max_gap_ms=self.max_gap_ms,
            modulation_cv_min=self.modulation_cv_min,
        )

    def metrics(self) -> MetricsConfig:
        return MetricsConfig(
            turn_gap_ms=self.turn_gap_ms,
            response_window_ms=self.response_window_ms,
            rate_max_per_min=self.rate_max_per_min,
            inequality=self.inequality,
        )

    def path_loss(self) -> PathLossParams:
        return PathLossParams(
            rssi_at_1m=self.rssi_at_1m, exponent=self.path_loss_exponent
        )


def parse_config_file(path: Path) -> dict:
    """Parse `key = value` lines; '#' starts a comment."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def load_config(
    config_path: Optional[Path] = None, overrides: Optional[dict] = None
) -> AppConfig:
    """Build an AppConfig from file values plus explicit overrides."""
    raw: dict = {}
    if config_path is not None:
        raw.update(parse_config_file(config_path))
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})

    typed: dict = {}
    field_types = {f.name: f.type for f in fields(AppConfig)}
    for key, value in raw.items():
        if key not in field_types:
            raise ConfigurationError(f"unknown config key {key!r}")
        kind = field_types[key]
        try:
            if kind in ("int",):
                typed[key] = int(value)
            elif kind in ("float",):
                typed[key] = float(value)
            elif key == "data_dir" or kind in ("str",):
                typed[key] = str(value)
            else:
                typed[key] = value
        except ValueError as exc:
            raise ConfigurationError(f"bad value for {key!r}: {value!r}") from exc
    return AppConfig(**typed)
