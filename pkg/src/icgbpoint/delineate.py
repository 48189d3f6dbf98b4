"""Weighted-time-window B-point delineation for impedance cardiograms.

Pipeline: band-pass filter the recording with zero phase, find C-points by
constrained peak search, then for every C-point take the 250 ms window that
precedes it, shift it to a zero minimum, normalize it to unit peak-to-peak,
multiply it by an adaptive weight window, and square the product. When the
squared trace shows exactly two admissible peaks, the B-point (the
"MB-point") is the minimum between them; otherwise an epsilon-band rule on
the shifted window decides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .filters import FilterSpec, design_bandpass, filtfilt
from .peaks import PeakConstraints, find_peaks


def ms_to_samples(ms: float, fs: float) -> int:
    """Convert a duration in milliseconds to samples.

    Rounds half away from zero so e.g. 0.25 ms at 2000 Hz gives 1 sample.
    """
    return int(math.floor(ms * fs / 1000.0 + 0.5))


class DetectionMethod(str, Enum):
    """Which branch produced a beat's B-point."""

    MB = "MB"
    FALLBACK = "Fallback"
    SKIPPED = "Skipped"


@dataclass(frozen=True)
class DetectorConfig:
    """Every tunable of the detection pipeline, with published defaults."""

    pre_c_window_ms: float = 250.0
    c_min_distance_ms: float = 350.0
    c_threshold_std_fraction: float = 0.8
    alpha: float = 0.1
    mb_min_peak_distance_ms: float = 50.0
    mb_threshold_divisor: float = 2000.0
    epsilon_fraction: float = 0.05
    filter: FilterSpec = field(default_factory=FilterSpec)

    def __post_init__(self) -> None:
        for name in ("pre_c_window_ms", "c_min_distance_ms", "mb_min_peak_distance_ms"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.c_threshold_std_fraction <= 0.0:
            raise ValueError(
                f"c_threshold_std_fraction must be positive, got {self.c_threshold_std_fraction}"
            )
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.mb_threshold_divisor <= 0.0:
            raise ValueError(
                f"mb_threshold_divisor must be positive, got {self.mb_threshold_divisor}"
            )
        if self.epsilon_fraction <= 0.0:
            raise ValueError(
                f"epsilon_fraction must be positive, got {self.epsilon_fraction}"
            )

    def to_dict(self) -> dict:
        return {
            "pre_c_window_ms": self.pre_c_window_ms,
            "c_min_distance_ms": self.c_min_distance_ms,
            "c_threshold_std_fraction": self.c_threshold_std_fraction,
            "alpha": self.alpha,
            "mb_min_peak_distance_ms": self.mb_min_peak_distance_ms,
            "mb_threshold_divisor": self.mb_threshold_divisor,
            "epsilon_fraction": self.epsilon_fraction,
            "filter": {
                "order": self.filter.order,
                "f_low": self.filter.f_low,
                "f_high": self.filter.f_high,
                "fs": self.filter.fs,
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DetectorConfig":
        data = dict(data)
        filt = data.pop("filter", {})
        return cls(
            filter=FilterSpec(
                order=int(filt.get("order", 3)),
                f_low=float(filt.get("f_low", 0.5)),
                f_high=float(filt.get("f_high", 50.0)),
                fs=filt.get("fs"),
            ),
            **{k: float(v) for k, v in data.items()},
        )


@dataclass(frozen=True)
class Segment:
    """The filtered window preceding one C-point.

    ``raw`` holds ``filtered[c_index - W, c_index)``; ``shifted`` is ``raw``
    minus its minimum, so ``min(shifted) == 0`` and ``max(shifted) == h``.
    Extremum indices are local to the segment, first occurrence on ties.
    """

    start_index: int
    raw: np.ndarray
    shifted: np.ndarray
    h: float
    argmin_local: int
    argmax_local: int

    def __len__(self) -> int:
        return len(self.raw)


@dataclass(frozen=True)
class BeatDetection:
    """Per-beat result: where C and B are and which branch produced B.

    ``b_index`` is None only for Skipped beats. ``transformed_peaks`` holds
    the two admissible peak locations (local to the segment) when the
    MB branch fired, for diagnostics.
    """

    c_index: int
    b_index: int | None
    method: DetectionMethod
    transformed_peaks: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.method is DetectionMethod.SKIPPED:
            if self.b_index is not None:
                raise ValueError("skipped beats carry no b_index")
        else:
            if self.b_index is None:
                raise ValueError(f"{self.method.value} beat needs a b_index")
            if self.b_index >= self.c_index:
                raise ValueError(
                    f"b_index {self.b_index} must precede c_index {self.c_index}"
                )


def preprocess(samples: np.ndarray, fs: float, config: DetectorConfig) -> np.ndarray:
    """Band-pass the raw signal with zero phase, per the configured filter."""
    spec = _bind_filter(config.filter, fs)
    coeffs = design_bandpass(spec)
    return filtfilt(coeffs, samples)


def _bind_filter(spec: FilterSpec, fs: float) -> FilterSpec:
    if spec.fs is None:
        return spec.with_fs(fs)
    if spec.fs != fs:
        raise ValueError(
            f"filter spec was designed for fs={spec.fs} but the recording has fs={fs}"
        )
    return spec


def detect_c_points(
    filtered: np.ndarray, fs: float, config: DetectorConfig
) -> np.ndarray:
    """Detect C-points on an already-filtered recording.

    C-points are local maxima with a minimum spacing (350 ms by default) and
    a height threshold of ``c_threshold_std_fraction`` times the sample
    standard deviation of the whole filtered recording.

    Returns:
        Ascending array of C-point sample indices.
    """
    filtered = np.asarray(filtered, dtype=float)
    min_distance = ms_to_samples(config.c_min_distance_ms, fs)
    if filtered.size <= min_distance:
        raise ValueError(
            f"recording too short: {filtered.size} samples, need more than "
            f"{min_distance} (one {config.c_min_distance_ms} ms spacing window)"
        )
    threshold = config.c_threshold_std_fraction * float(np.std(filtered, ddof=1))
    return find_peaks(
        filtered, PeakConstraints(min_distance=min_distance, min_height=threshold)
    )


def extract_segment(
    filtered: np.ndarray, c_index: int, fs: float, config: DetectorConfig
) -> Segment | None:
    """Cut the pre-C analysis window for one beat.

    Returns None (the beat is Skipped) when there is not enough history
    before the C-point or the window is flat (zero peak-to-peak).
    """
    window = ms_to_samples(config.pre_c_window_ms, fs)
    if c_index < window:
        return None
    raw = np.asarray(filtered[c_index - window : c_index], dtype=float)
    lo = float(raw.min())
    hi = float(raw.max())
    h = hi - lo
    if h <= 0.0:
        return None
    return Segment(
        start_index=int(c_index - window),
        raw=raw,
        shifted=raw - lo,
        h=h,
        argmin_local=int(np.argmin(raw)),
        argmax_local=int(np.argmax(raw)),
    )


def build_weight_window(segment: Segment, alpha: float) -> np.ndarray | None:
    """Construct the adaptive weight window for a segment.

    The window ramps linearly down from ``h`` at the segment minimum's
    location to 0 at the segment maximum's location; every sample outside the
    ramp is ``-alpha``. Multiplied with the min-shifted segment and squared,
    the ramp turns the B-to-C upstroke into a peak that falls back to zero,
    while the ``-alpha`` plateau keeps the earlier part of the window small;
    the B-point survives as the valley in between. The window's peak-to-peak
    is ``h + alpha``.

    Returns None for degenerate geometry (minimum at the first sample, or
    maximum not after the minimum); callers fall back to the epsilon-band
    rule.
    """
    t_start = segment.argmin_local
    t_stop = segment.argmax_local
    if segment.h <= 0.0 or t_start == 0 or t_stop <= t_start:
        return None
    weights = np.full(len(segment), -alpha, dtype=float)
    ramp = np.arange(t_start, t_stop + 1)
    weights[t_start : t_stop + 1] = segment.h * (t_stop - ramp) / (t_stop - t_start)
    return weights


def transform_segment(segment: Segment, weights: np.ndarray) -> np.ndarray:
    """Scale the shifted segment by the weights, then square element-wise."""
    if len(weights) != len(segment):
        raise ValueError(
            f"weights length {len(weights)} != segment length {len(segment)}"
        )
    return (segment.shifted * weights) ** 2


def locate_mb_point(
    transformed: np.ndarray, fs: float, config: DetectorConfig
) -> tuple[int, tuple[int, int]] | None:
    """Locate the MB-point on the transformed segment.

    The admissible peaks are local maxima spaced at least 50 ms apart (by
    default) and taller than the segment maximum divided by 2000. Only when
    exactly two such peaks exist is the MB-point defined: the minimum of the
    transformed trace strictly between them (ties to the earlier index).

    Returns:
        ``(mb_local_index, (p1, p2))`` or None when the two-peak criterion
        fails.
    """
    transformed = np.asarray(transformed, dtype=float)
    peak_max = float(transformed.max(initial=0.0))
    if peak_max <= 0.0:
        return None
    constraints = PeakConstraints(
        min_distance=ms_to_samples(config.mb_min_peak_distance_ms, fs),
        min_height=peak_max / config.mb_threshold_divisor,
    )
    peaks = find_peaks(transformed, constraints)
    if len(peaks) != 2:
        return None
    p1, p2 = int(peaks[0]), int(peaks[1])
    if p2 - p1 < 2:
        return None
    valley = p1 + 1 + int(np.argmin(transformed[p1 + 1 : p2]))
    return valley, (p1, p2)


def fallback_b_point(segment: Segment, config: DetectorConfig) -> int:
    """Epsilon-band B-point for beats the two-peak criterion rejects.

    With ``epsilon = epsilon_fraction * h``, picks the latest sample of the
    shifted segment whose amplitude is within epsilon of zero, i.e. the last
    near-minimum point before the C upstroke. If that sample is the very last
    of the segment, the previous qualifying sample is used instead.
    """
    epsilon = config.epsilon_fraction * segment.h
    qualifying = np.flatnonzero(segment.shifted <= epsilon)
    if qualifying.size == 0:
        return segment.argmin_local
    pick = int(qualifying[-1])
    if pick == len(segment) - 1 and qualifying.size >= 2:
        pick = int(qualifying[-2])
    return pick


def detect_b_points(recording, config: DetectorConfig) -> list[BeatDetection]:
    """Run the full pipeline on a raw recording.

    ``recording`` is any object with ``samples`` and ``fs`` attributes (see
    :class:`icgbpoint.io.Recording`). Every detected C-point yields exactly
    one entry: MB when the two-peak criterion holds, Fallback when the
    epsilon-band rule had to decide, Skipped when no analysis window exists.
    The number of Fallback beats is the "Missed" statistic of the evaluation
    reports.
    """
    samples = np.asarray(recording.samples, dtype=float)
    fs = float(recording.fs)
    filtered = preprocess(samples, fs, config)
    c_points = detect_c_points(filtered, fs, config)

    detections: list[BeatDetection] = []
    for c_index in c_points:
        detections.append(_delineate_beat(filtered, int(c_index), fs, config))
    return detections


def normalize_segment(segment: Segment) -> Segment:
    """Rescale a segment to unit peak-to-peak, keeping its shape.

    The weighted window is applied to this normalized form so that alpha acts
    relative to the beat's amplitude: otherwise the constant -alpha plateau
    would make the squared transform scale as c^2 where the ramp scales as
    c^4, and detection would depend on the recording's amplitude calibration.
    """
    scale = segment.shifted / segment.h
    return Segment(
        start_index=segment.start_index,
        raw=scale,
        shifted=scale,
        h=1.0,
        argmin_local=segment.argmin_local,
        argmax_local=segment.argmax_local,
    )


def _delineate_beat(
    filtered: np.ndarray, c_index: int, fs: float, config: DetectorConfig
) -> BeatDetection:
    segment = extract_segment(filtered, c_index, fs, config)
    if segment is None:
        return BeatDetection(c_index=c_index, b_index=None, method=DetectionMethod.SKIPPED)
    unit = normalize_segment(segment)
    weights = build_weight_window(unit, config.alpha)
    if weights is not None:
        located = locate_mb_point(transform_segment(unit, weights), fs, config)
        if located is not None:
            local, peak_pair = located
            return BeatDetection(
                c_index=c_index,
                b_index=segment.start_index + local,
                method=DetectionMethod.MB,
                transformed_peaks=peak_pair,
            )
    local = fallback_b_point(segment, config)
    return BeatDetection(
        c_index=c_index,
        b_index=segment.start_index + local,
        method=DetectionMethod.FALLBACK,
    )


def fallback_count(detections: list[BeatDetection]) -> int:
    """Number of beats resolved by the epsilon-band branch ("Missed")."""
    return sum(1 for d in detections if d.method is DetectionMethod.FALLBACK)


def beat_trace(
    filtered: np.ndarray, c_index: int, fs: float, config: DetectorConfig
) -> dict:
    """Per-beat intermediate traces for external plotting.

    Returns the shifted segment, the weight window, the transformed trace and
    the chosen B-point for one C-point, all as plain lists.
    """
    segment = extract_segment(filtered, c_index, fs, config)
    if segment is None:
        return {"c_index": int(c_index), "skipped": True}
    detection = _delineate_beat(filtered, int(c_index), fs, config)
    unit = normalize_segment(segment)
    weights = build_weight_window(unit, config.alpha)
    trace = {
        "c_index": int(c_index),
        "skipped": False,
        "start_index": segment.start_index,
        "h": segment.h,
        "shifted": segment.shifted.tolist(),
        "weights": weights.tolist() if weights is not None else None,
        "transformed": (
            transform_segment(unit, weights).tolist() if weights is not None else None
        ),
        "b_index": detection.b_index,
        "method": detection.method.value,
        "transformed_peaks": (
            list(detection.transformed_peaks) if detection.transformed_peaks else None
        ),
    }
    return trace
