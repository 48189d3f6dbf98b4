"""Band-pass preprocessing: Butterworth design and zero-phase application.

The detector filters every recording with a Butterworth band-pass (analog
prototype order 3, digital order 6, 0.5-50 Hz by default) applied forward and
backward so the net phase response is zero and the magnitude response is
squared. The filter is realized as cascaded second-order sections; a direct
polynomial form of a 6th-order band-pass with a 0.5 Hz edge at fs = 2000 Hz
is numerically fragile.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import signal as sig

Section = tuple[float, float, float, float, float]


@dataclass(frozen=True)
class FilterSpec:
    """Band-pass design parameters.

    ``order`` is the analog prototype order; the digital band-pass has order
    ``2 * order``. ``fs`` may be left as None and bound to a recording later
    via :meth:`with_fs`.
    """

    order: int = 3
    f_low: float = 0.5
    f_high: float = 50.0
    fs: float | None = None

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"filter order must be >= 1, got {self.order}")
        if not (0.0 < self.f_low < self.f_high):
            raise ValueError(
                f"need 0 < f_low < f_high, got f_low={self.f_low}, f_high={self.f_high}"
            )
        if self.fs is not None:
            if self.fs <= 0.0:
                raise ValueError(f"fs must be positive, got {self.fs}")
            if self.f_high >= self.fs / 2.0:
                raise ValueError(
                    f"f_high={self.f_high} must lie below the Nyquist frequency {self.fs / 2.0}"
                )

    def with_fs(self, fs: float) -> "FilterSpec":
        """Return a copy bound to sampling rate ``fs`` (validates the band)."""
        return replace(self, fs=float(fs))


@dataclass(frozen=True)
class FilterCoefficients:
    """Cascaded second-order sections plus an overall gain.

    Each section is ``(b0, b1, b2, a1, a2)`` with ``a0`` normalized to 1.
    Every section must be stable (poles strictly inside the unit circle).
    """

    sections: tuple[Section, ...]
    gain: float = 1.0

    def __post_init__(self) -> None:
        if not self.sections:
            raise ValueError("at least one second-order section is required")
        for i, (_, _, _, a1, a2) in enumerate(self.sections):
            poles = np.roots([1.0, a1, a2])
            radius = float(np.max(np.abs(poles))) if poles.size else 0.0
            if radius >= 1.0:
                raise ValueError(
                    f"section {i} is unstable: pole radius {radius:.6f} >= 1"
                )

    @property
    def sos(self) -> np.ndarray:
        """Sections as a scipy-style (n, 6) array with a0 = 1."""
        return np.array(
            [(b0, b1, b2, 1.0, a1, a2) for b0, b1, b2, a1, a2 in self.sections],
            dtype=float,
        )

    @property
    def pad_length(self) -> int:
        """Edge-extension length used by :func:`filtfilt`: 3 * (order + 1)."""
        return 3 * (2 * len(self.sections) + 1)


def design_bandpass(spec: FilterSpec) -> FilterCoefficients:
    """Design the digital band-pass for ``spec``.

    Uses the standard route: Butterworth analog low-pass prototype of order
    ``spec.order``, low-pass to band-pass transform, bilinear mapping with
    both band edges prewarped. The result has ``spec.order`` second-order
    sections (digital order ``2 * spec.order``).

    Raises:
        ValueError: if ``spec.fs`` is unset or the band is invalid.
    """
    if spec.fs is None:
        raise ValueError("FilterSpec.fs must be set before designing (use with_fs)")
    z, p, k = sig.butter(
        spec.order,
        [spec.f_low, spec.f_high],
        btype="bandpass",
        output="zpk",
        fs=spec.fs,
    )
    sos = sig.zpk2sos(z, p, 1.0)
    sections = tuple(
        (float(b0), float(b1), float(b2), float(a1), float(a2))
        for b0, b1, b2, _, a1, a2 in sos
    )
    return FilterCoefficients(sections=sections, gain=float(k))


def filtfilt(coeffs: FilterCoefficients, x: np.ndarray) -> np.ndarray:
    """Apply ``coeffs`` forward and backward (zero net phase).

    Edges are handled by odd (point-reflected) extension of
    ``coeffs.pad_length`` samples at each end, discarded after the backward
    pass. The effective magnitude response is the square of the single-pass
    response.

    Args:
        coeffs: Designed filter.
        x: One-dimensional, finite input, strictly longer than
            ``coeffs.pad_length``.

    Returns:
        Filtered sequence with the same length as ``x``.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("x must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise ValueError("x contains non-finite values")
    pad = coeffs.pad_length
    if x.size <= pad:
        raise ValueError(
            f"input too short: need more than {pad} samples for edge padding, got {x.size}"
        )
    y = sig.sosfiltfilt(coeffs.sos, x, padtype="odd", padlen=pad)
    return y * (coeffs.gain**2)


def frequency_response(
    coeffs: FilterCoefficients, freqs: np.ndarray, fs: float
) -> np.ndarray:
    """Single-pass complex response of ``coeffs`` at ``freqs`` (Hz)."""
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    _, h = sig.sosfreqz(coeffs.sos, worN=freqs, fs=fs)
    return h * coeffs.gain
