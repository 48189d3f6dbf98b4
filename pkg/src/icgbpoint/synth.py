"""Synthetic ICG-like recordings with exact beat landmarks for testing.

Each beat is a sum of smooth Gaussian bumps: a small atrial hump, a narrow
negative notch (the synthetic B-point), the dominant C wave and a dip after
it. Landmark sample indices are exact by construction, so detector output can
be scored without any external dataset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .delineate import ms_to_samples
from .io import AnnotationSet, Recording

# Spacing bound of the C detector: 60 s / 350 ms minimum peak distance.
MAX_HEART_RATE_BPM = 171.4

C_AMPLITUDE = 1.0
C_SIGMA_MS = 25.0
NOTCH_SIGMA_MS = 9.0
A_WAVE_AMPLITUDE = 0.22
A_WAVE_LEAD_MS = 150.0
A_WAVE_SIGMA_MS = 20.0
X_WAVE_DEPTH = 0.45
X_WAVE_LAG_MS = 80.0
X_WAVE_SIGMA_MS = 18.0
LEAD_IN_S = 1.0
TAIL_S = 1.0


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic recording."""

    fs: float = 2000.0
    n_beats: int = 60
    heart_rate_bpm: float = 72.0
    b_to_c_ms: float = 60.0
    notch_depth: float = 0.35
    noise_rms: float = 0.0
    rr_jitter_pct: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.fs <= 0.0:
            raise ValueError(f"fs must be positive, got {self.fs}")
        if self.n_beats < 1:
            raise ValueError(f"n_beats must be >= 1, got {self.n_beats}")
        if not 0.0 < self.heart_rate_bpm < MAX_HEART_RATE_BPM:
            raise ValueError(
                f"heart_rate_bpm must lie in (0, {MAX_HEART_RATE_BPM}), "
                f"got {self.heart_rate_bpm}"
            )
        if not 0.0 < self.b_to_c_ms < 250.0:
            raise ValueError(
                f"b_to_c_ms must lie in (0, 250) so the notch stays inside the "
                f"analysis window, got {self.b_to_c_ms}"
            )
        if not 0.0 < self.notch_depth <= 1.0:
            raise ValueError(f"notch_depth must lie in (0, 1], got {self.notch_depth}")
        if self.noise_rms < 0.0:
            raise ValueError(f"noise_rms must be >= 0, got {self.noise_rms}")
        if not 0.0 <= self.rr_jitter_pct < 50.0:
            raise ValueError(
                f"rr_jitter_pct must lie in [0, 50), got {self.rr_jitter_pct}"
            )
        fastest_bpm = self.heart_rate_bpm / (1.0 - self.rr_jitter_pct / 100.0)
        if fastest_bpm >= MAX_HEART_RATE_BPM:
            raise ValueError(
                f"rr_jitter_pct {self.rr_jitter_pct} lets the instantaneous rate "
                f"reach {fastest_bpm:.1f} bpm, beyond the {MAX_HEART_RATE_BPM} bpm bound"
            )


def _add_bump(x: np.ndarray, center: int, sigma_samples: float, amplitude: float) -> None:
    """Add a Gaussian bump in place, truncated at six sigma."""
    half = int(np.ceil(6.0 * sigma_samples))
    lo = max(center - half, 0)
    hi = min(center + half + 1, x.size)
    n = np.arange(lo, hi)
    x[lo:hi] += amplitude * np.exp(-0.5 * ((n - center) / sigma_samples) ** 2)


def synthesize_icg(spec: SynthSpec) -> tuple[Recording, AnnotationSet]:
    """Generate a recording plus its exact ground-truth annotations.

    The k-th C-peak is centered on an exact sample index and the synthetic
    B-notch exactly ``b_to_c_ms`` earlier. Output is deterministic for a
    fixed spec (including the seed).
    """
    rng = np.random.default_rng(spec.seed)
    fs = spec.fs
    nominal_period = 60.0 / spec.heart_rate_bpm * fs

    intervals = np.full(spec.n_beats - 1, nominal_period)
    if spec.rr_jitter_pct > 0.0 and spec.n_beats > 1:
        jitter = rng.uniform(-1.0, 1.0, size=spec.n_beats - 1)
        intervals = nominal_period * (1.0 + spec.rr_jitter_pct / 100.0 * jitter)
    c_indices = np.empty(spec.n_beats, dtype=int)
    c_indices[0] = int(round(LEAD_IN_S * fs))
    for k, interval in enumerate(intervals):
        c_indices[k + 1] = c_indices[k] + int(round(interval))

    b_offset = ms_to_samples(spec.b_to_c_ms, fs)
    b_indices = c_indices - b_offset

    total = int(c_indices[-1] + round(TAIL_S * fs))
    x = np.zeros(total, dtype=float)
    sigma_c = C_SIGMA_MS * fs / 1000.0
    sigma_notch = NOTCH_SIGMA_MS * fs / 1000.0
    sigma_a = A_WAVE_SIGMA_MS * fs / 1000.0
    sigma_x = X_WAVE_SIGMA_MS * fs / 1000.0
    a_lead = ms_to_samples(A_WAVE_LEAD_MS, fs)
    x_lag = ms_to_samples(X_WAVE_LAG_MS, fs)
    for c, b in zip(c_indices, b_indices):
        _add_bump(x, c, sigma_c, C_AMPLITUDE)
        _add_bump(x, b, sigma_notch, -spec.notch_depth * C_AMPLITUDE)
        _add_bump(x, c - a_lead, sigma_a, A_WAVE_AMPLITUDE * C_AMPLITUDE)
        _add_bump(x, c + x_lag, sigma_x, -X_WAVE_DEPTH * C_AMPLITUDE)

    if spec.noise_rms > 0.0:
        x += rng.normal(0.0, spec.noise_rms, size=total)

    recording_id = f"synth-{spec.seed}"
    recording = Recording(id=recording_id, fs=fs, samples=x, unit="Ohm/s")
    truth = AnnotationSet(
        recording_id=recording_id,
        b_points=[int(v) for v in b_indices],
        c_points=[int(v) for v in c_indices],
        annotator="ground-truth",
    )
    return recording, truth
