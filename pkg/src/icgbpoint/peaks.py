"""Constrained local-maxima search shared by the C-point and MB-point stages."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PeakConstraints:
    """Constraints applied by :func:`find_peaks`.

    Attributes:
        min_distance: Minimum spacing between any two returned indices, in
            samples. Values of 0 or 1 impose no spacing constraint.
        min_height: Minimum sample value for a candidate to qualify.
        max_count: Optional cap on the number of returned peaks. The tallest
            peaks are kept.
    """

    min_distance: int = 1
    min_height: float = float("-inf")
    max_count: int | None = None

    def __post_init__(self) -> None:
        if self.min_distance < 0:
            raise ValueError(f"min_distance must be >= 0, got {self.min_distance}")
        if self.max_count is not None and self.max_count < 0:
            raise ValueError(f"max_count must be >= 0, got {self.max_count}")


def find_peaks(x: np.ndarray, constraints: PeakConstraints) -> np.ndarray:
    """Find strict local maxima of ``x`` subject to ``constraints``.

    A strict local maximum needs two strictly smaller neighbours, so the first
    and last sample are never peaks. A plateau (a run of equal values flanked
    by strictly smaller neighbours) counts once, at its first index. When two
    candidates lie closer than ``min_distance``, the taller survives; height
    ties are resolved in favour of the earlier index.

    Args:
        x: One-dimensional, finite sample sequence.
        constraints: Height / spacing / count constraints.

    Returns:
        Ascending integer array of peak indices.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("x must be one-dimensional")
    if x.size and not np.all(np.isfinite(x)):
        raise ValueError("x contains non-finite values")
    if x.size < 3:
        return np.empty(0, dtype=np.intp)

    # Collapse plateaus: a candidate is the first index after a rising step
    # whose next value change is a falling step.
    step = np.diff(x)
    change = np.flatnonzero(step != 0.0)
    if change.size < 2:
        return np.empty(0, dtype=np.intp)
    rising = step[change[:-1]] > 0.0
    falling = step[change[1:]] < 0.0
    candidates = change[:-1][rising & falling] + 1
    candidates = candidates[x[candidates] >= constraints.min_height]
    if candidates.size == 0:
        return np.empty(0, dtype=np.intp)

    # Greedy selection, tallest first (ties: earlier index), dropping every
    # candidate within min_distance of an accepted peak.
    order = np.lexsort((candidates, -x[candidates]))
    alive = np.ones(candidates.size, dtype=bool)
    distance = max(int(constraints.min_distance), 1)
    accepted: list[int] = []
    for k in order:
        if not alive[k]:
            continue
        if constraints.max_count is not None and len(accepted) >= constraints.max_count:
            break
        peak = int(candidates[k])
        accepted.append(peak)
        lo = np.searchsorted(candidates, peak - (distance - 1), side="left")
        hi = np.searchsorted(candidates, peak + (distance - 1), side="right")
        alive[lo:hi] = False
    accepted.sort()
    return np.asarray(accepted, dtype=np.intp)
