"""Speech-detection signal pipeline.

Raw audio frames go through a band-pass filter, are reduced to a volume
series (mean absolute amplitude per averaging period), smoothed with a
rolling median, and thresholded into speaking events. All functions are
pure; no shared state.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import signal as _signal

from .errors import ConfigurationError, EmptyInputError

DEFAULT_SAMPLE_RATE_HZ = 8000
HARDWARE_VOLUME_PERIOD_MS = 250
PHONE_VOLUME_PERIOD_MS = 10


@dataclass(frozen=True)
class AudioFrameSeries:
    """A contiguous run of normalized audio samples for one participant."""

    participant_id: str
    sample_rate: int
    start_ts: int  # ms since epoch
    amplitudes: tuple[float, ...]

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ConfigurationError("sample_rate must be positive")
        amps = np.asarray(self.amplitudes, dtype=float)
        if amps.size and (amps.min() < -1.0 or amps.max() > 1.0):
            raise ValueError("amplitudes must lie in [-1, +1]")
        object.__setattr__(self, "amplitudes", tuple(amps.tolist()))


@dataclass(frozen=True)
class VolumeSample:
    """Mean-absolute amplitude over one averaging period."""

    participant_id: str
    ts: int  # period start, ms since epoch
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"volume out of range: {self.value}")


@dataclass(frozen=True)
class SpeakingEvent:
    """A detected speech interval, half-open [start_ts, end_ts)."""

    participant_id: str
    start_ts: int
    end_ts: int

    def __post_init__(self):
        if self.start_ts >= self.end_ts:
            raise ValueError("start_ts must precede end_ts")

    @property
    def duration_ms(self) -> int:
        return self.end_ts - self.start_ts


@dataclass(frozen=True)
class PipelineConfig:
    """Tunable pipeline parameters.

    The speaking threshold, event duration/gap limits, and the modulation
    criterion are all experimentally chosen, so they live in config rather
    than as constants.
    """

    band_lo_hz: float = 100.0
    band_hi_hz: float = 3900.0
    median_window: int = 5
    speak_threshold: float = 0.05
    min_event_ms: int = 500
    max_gap_ms: int = 300
    modulation_cv_min: float = 0.1
    use_rms: bool = False  # mean-absolute by default

    def __post_init__(self):
        if not 0 < self.band_lo_hz < self.band_hi_hz:
            raise ConfigurationError("need 0 < band_lo_hz < band_hi_hz")
        if self.median_window < 1 or self.median_window % 2 == 0:
            raise ConfigurationError("median_window must be odd and >= 1")
        if not 0.0 < self.speak_threshold < 1.0:
            raise ConfigurationError("speak_threshold must be in (0, 1)")
        if self.min_event_ms <= 0:
            raise ConfigurationError("min_event_ms must be positive")
        if self.max_gap_ms < 0:
            raise ConfigurationError("max_gap_ms must be nonnegative")
        if self.modulation_cv_min < 0:
            raise ConfigurationError("modulation_cv_min must be nonnegative")


def _design_bandpass(cfg: PipelineConfig, sample_rate: int) -> np.ndarray:
    nyquist = sample_rate / 2.0
    if not cfg.band_lo_hz < cfg.band_hi_hz < nyquist:
        raise ConfigurationError(
            f"band edges ({cfg.band_lo_hz}, {cfg.band_hi_hz}) invalid for fs={sample_rate}"
        )
    return _signal.butter(
        4, [cfg.band_lo_hz, cfg.band_hi_hz], btype="band", fs=sample_rate, output="sos"
    )


def bandpass_response_db(cfg: PipelineConfig, sample_rate: int, freqs_hz: Sequence[float]) -> np.ndarray:
    """Closed-form magnitude response in dB; the verification oracle for the filter."""
    sos = _design_bandpass(cfg, sample_rate)
    _, h = _signal.sosfreqz(sos, worN=np.asarray(freqs_hz, dtype=float), fs=sample_rate)
    return 20.0 * np.log10(np.maximum(np.abs(h), 1e-300))


def bandpass_filter(frames: AudioFrameSeries, cfg: PipelineConfig) -> AudioFrameSeries:
    """Apply a causal 4th-order Butterworth band-pass; same length and timestamps."""
    sos = _design_bandpass(cfg, frames.sample_rate)
    filtered = _signal.sosfilt(sos, np.asarray(frames.amplitudes, dtype=float))
    filtered = np.clip(filtered, -1.0, 1.0)
    return replace(frames, amplitudes=tuple(filtered.tolist()))


def compute_volume(
    frames: AudioFrameSeries, period_ms: int, use_rms: bool = False
) -> list[VolumeSample]:
    """Reduce frames to one volume per full period; trailing partial period dropped."""
    amps = np.asarray(frames.amplitudes, dtype=float)
    if amps.size == 0:
        raise EmptyInputError("cannot compute volume of an empty frame series")
    samples_per_period = int(round(frames.sample_rate * period_ms / 1000.0))
    if samples_per_period < 1:
        raise ConfigurationError("period_ms spans less than one sample")
    n_periods = amps.size // samples_per_period
    blocks = amps[: n_periods * samples_per_period].reshape(n_periods, samples_per_period)
    if use_rms:
        values = np.sqrt(np.mean(blocks**2, axis=1))
    else:
        values = np.mean(np.abs(blocks), axis=1)
    return [
        VolumeSample(
            participant_id=frames.participant_id,
            ts=frames.start_ts + i * period_ms,
            value=float(min(v, 1.0)),
        )
        for i, v in enumerate(values)
    ]


def rolling_median(series: Sequence[VolumeSample], window: int) -> list[VolumeSample]:
    """Centered rolling median; edges shrink to the largest odd window that fits."""
    if window < 1 or window % 2 == 0:
        raise ConfigurationError("median window must be odd and >= 1")
    n = len(series)
    if window > n:
        raise ConfigurationError("median window exceeds series length")
    values = np.array([s.value for s in series], dtype=float)
    half = window // 2
    out = []
    for i in range(n):
        k = min(half, i, n - 1 - i)
        med = float(np.median(values[i - k : i + k + 1]))
        out.append(replace(series[i], value=med))
    return out


def _series_period_ms(series: Sequence[VolumeSample]) -> int:
    if len(series) < 2:
        return 0
    return series[1].ts - series[0].ts


@dataclass(frozen=True)
class _Run:
    start_idx: int
    end_idx: int  # inclusive


def detect_speaking(
    series: Sequence[VolumeSample], cfg: PipelineConfig
) -> list[SpeakingEvent]:
    """Threshold the volume series into disjoint, sorted speaking events.

    Samples at or above ``speak_threshold`` are marked; marked runs separated by
    gaps <= ``max_gap_ms`` merge; merged runs shorter than ``min_event_ms`` or
    with volume coefficient of variation below ``modulation_cv_min`` (steady
    tones) are dropped. Each sample covers [ts, ts + period).
    """
    if not series:
        return []
    ts = np.array([s.ts for s in series], dtype=np.int64)
    if len(series) > 1 and not np.all(np.diff(ts) > 0):
        raise ValueError("series timestamps must be strictly increasing")
    period = _series_period_ms(series)
    values = np.array([s.value for s in series], dtype=float)
    marked = values >= cfg.speak_threshold

    runs: list[_Run] = []
    i = 0
    n = len(series)
    while i < n:
        if marked[i]:
            j = i
            while j + 1 < n and marked[j + 1]:
                j += 1
            runs.append(_Run(i, j))
            i = j + 1
        else:
            i += 1

    # merge runs whose inter-run gap is small enough
    merged: list[_Run] = []
    for run in runs:
        if merged:
            prev = merged[-1]
            gap = ts[run.start_idx] - (ts[prev.end_idx] + period)
            if gap <= cfg.max_gap_ms:
                merged[-1] = _Run(prev.start_idx, run.end_idx)
                continue
        merged.append(run)

    events: list[SpeakingEvent] = []
    for run in merged:
        start = int(ts[run.start_idx])
        end = int(ts[run.end_idx]) + period
        if end - start < cfg.min_event_ms:
            continue
        segment = values[run.start_idx : run.end_idx + 1]
        mean = float(np.mean(segment))
        cv = float(np.std(segment) / mean) if mean > 0 else 0.0
        if cv < cfg.modulation_cv_min:
            continue
        events.append(
            SpeakingEvent(
                participant_id=series[0].participant_id, start_ts=start, end_ts=end
            )
        )
    return events


def process_volume_series(
    series: Sequence[VolumeSample], cfg: PipelineConfig
) -> list[SpeakingEvent]:
    """Smooth then detect; the badge-path entry point (volumes arrive pre-averaged)."""
    if not series:
        return []
    window = min(cfg.median_window, len(series))
    if window % 2 == 0:
        window -= 1
    smoothed = rolling_median(series, window)
    return detect_speaking(smoothed, cfg)


def process_frames(
    frames: AudioFrameSeries, cfg: PipelineConfig, period_ms: int = PHONE_VOLUME_PERIOD_MS
) -> tuple[list[VolumeSample], list[SpeakingEvent]]:
    """Full phone-path pipeline: filter, volume, smooth, detect."""
    filtered = bandpass_filter(frames, cfg)
    volumes = compute_volume(filtered, period_ms, use_rms=cfg.use_rms)
    return volumes, process_volume_series(volumes, cfg)
