"""Detector-vs-annotation scoring and multi-recording aggregation.

Beats are paired ordinally (k-th detection with k-th annotation): detector
output is one-B-per-C by construction, so a count mismatch is a data error,
not something to repair. Under that pairing MD = 0, which is why positive
predictivity is structurally 100%.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .delineate import BeatDetection, DetectionMethod, fallback_count
from .errors import DataError
from .io import AnnotationSet


@dataclass(frozen=True)
class MatchResult:
    """Tolerance-matching outcome for one recording at one tolerance."""

    tp: int
    fd: int
    md: int
    per_beat_errors: tuple[float, ...]


def match_beats(
    detections: list[BeatDetection],
    annotations: AnnotationSet,
    tolerance_ms: float,
    fs: float,
) -> MatchResult:
    """Match detected B-points against annotations at one tolerance.

    Skipped beats are excluded; the remaining detections must equal the
    annotation count. A pair is a True Point when the signed error
    ``(detected - annotated) * 1000 / fs`` lies within ``tolerance_ms``,
    otherwise a Failed Detection. Missed Detections cannot occur under the
    ordinal pairing.
    """
    paired = [d for d in detections if d.method is not DetectionMethod.SKIPPED]
    if len(paired) != len(annotations.b_points):
        raise DataError(
            f"beat count mismatch: {len(paired)} detections vs "
            f"{len(annotations.b_points)} annotations"
        )
    errors = tuple(
        (d.b_index - a) * 1000.0 / fs for d, a in zip(paired, annotations.b_points)
    )
    tp = sum(1 for e in errors if abs(e) <= tolerance_ms)
    return MatchResult(tp=tp, fd=len(errors) - tp, md=0, per_beat_errors=errors)


def sensitivity(tp: int, fd: int) -> float:
    """Se = 100 * TP / (TP + FD)."""
    if tp + fd <= 0:
        raise ValueError("sensitivity undefined: tp + fd = 0")
    return 100.0 * tp / (tp + fd)


def positive_predictivity(tp: int, md: int) -> float:
    """PP = 100 * TP / (TP + MD)."""
    if tp + md <= 0:
        raise ValueError("positive predictivity undefined: tp + md = 0")
    return 100.0 * tp / (tp + md)


def detection_error(tp: int, fd: int, md: int) -> float:
    """DE = 100 * (FD + MD) / (TP + FD)."""
    if tp + fd <= 0:
        raise ValueError("detection error undefined: tp + fd = 0")
    return 100.0 * (fd + md) / (tp + fd)


@dataclass(frozen=True)
class ToleranceScores:
    """Percent metrics for one recording at one tolerance."""

    tolerance_ms: float
    tp: int
    fd: int
    md: int
    acc: float
    se: float
    pp: float
    de: float


@dataclass(frozen=True)
class RecordingReport:
    """Per-recording evaluation row (one Table-style line)."""

    recording_id: str
    n: int
    missed: int
    skipped: int
    scores: tuple[ToleranceScores, ...]

    def at(self, tolerance_ms: float) -> ToleranceScores:
        for s in self.scores:
            if s.tolerance_ms == tolerance_ms:
                return s
        raise KeyError(f"no scores at tolerance {tolerance_ms} ms")


def evaluate_recording(
    detections: list[BeatDetection],
    annotations: AnnotationSet,
    fs: float,
    tolerances_ms: tuple[float, ...] = (30.0, 150.0),
    recording_id: str | None = None,
) -> RecordingReport:
    """Score one recording at every requested tolerance."""
    scores = []
    for tolerance in tolerances_ms:
        result = match_beats(detections, annotations, tolerance, fs)
        n = result.tp + result.fd
        scores.append(
            ToleranceScores(
                tolerance_ms=tolerance,
                tp=result.tp,
                fd=result.fd,
                md=result.md,
                acc=100.0 * result.tp / n,
                se=sensitivity(result.tp, result.fd),
                pp=positive_predictivity(result.tp, result.md),
                de=detection_error(result.tp, result.fd, result.md),
            )
        )
    return RecordingReport(
        recording_id=recording_id or annotations.recording_id,
        n=len(annotations.b_points),
        missed=fallback_count(detections),
        skipped=sum(1 for d in detections if d.method is DetectionMethod.SKIPPED),
        scores=tuple(scores),
    )


@dataclass(frozen=True)
class AggregateScores:
    """Mean and sample standard deviation of each metric across recordings."""

    tolerance_ms: float
    acc_mean: float
    acc_sd: float
    se_mean: float
    se_sd: float
    pp_mean: float
    pp_sd: float
    de_mean: float
    de_sd: float


@dataclass(frozen=True)
class EvalReport:
    """Per-recording rows plus the aggregate row of a Table-style report."""

    recordings: tuple[RecordingReport, ...]
    tolerances_ms: tuple[float, ...]
    aggregates: tuple[AggregateScores, ...]
    missed_total: int
    n_total: int
    n_recordings: int

    def aggregate_at(self, tolerance_ms: float) -> AggregateScores:
        for a in self.aggregates:
            if a.tolerance_ms == tolerance_ms:
                return a
        raise KeyError(f"no aggregate at tolerance {tolerance_ms} ms")

    def to_dict(self) -> dict:
        return {
            "tolerances_ms": list(self.tolerances_ms),
            "n_recordings": self.n_recordings,
            "missed_total": self.missed_total,
            "n_total": self.n_total,
            "recordings": [
                {
                    "recording_id": r.recording_id,
                    "n": r.n,
                    "missed": r.missed,
                    "skipped": r.skipped,
                    "scores": [
                        {
                            "tolerance_ms": s.tolerance_ms,
                            "tp": s.tp,
                            "fd": s.fd,
                            "md": s.md,
                            "acc": s.acc,
                            "se": s.se,
                            "pp": s.pp,
                            "de": s.de,
                        }
                        for s in r.scores
                    ],
                }
                for r in self.recordings
            ],
            "aggregates": [
                {
                    "tolerance_ms": a.tolerance_ms,
                    "acc_mean": a.acc_mean,
                    "acc_sd": a.acc_sd,
                    "se_mean": a.se_mean,
                    "se_sd": a.se_sd,
                    "pp_mean": a.pp_mean,
                    "pp_sd": a.pp_sd,
                    "de_mean": a.de_mean,
                    "de_sd": a.de_sd,
                }
                for a in self.aggregates
            ],
        }


def _mean_sd(values: list[float]) -> tuple[float, float]:
    """Mean and n-1 standard deviation; a single value reports sd 0."""
    if len(values) == 1:
        return float(values[0]), 0.0
    return float(np.mean(values)), float(np.std(values, ddof=1))


def aggregate(reports: list[RecordingReport]) -> EvalReport:
    """Aggregate per-recording reports into mean +/- sd rows and sums."""
    if not reports:
        raise ValueError("no recordings to aggregate")
    tolerances = tuple(s.tolerance_ms for s in reports[0].scores)
    for r in reports[1:]:
        if tuple(s.tolerance_ms for s in r.scores) != tolerances:
            raise ValueError("all reports must share the same tolerance list")
    aggregates = []
    for tolerance in tolerances:
        acc = [r.at(tolerance).acc for r in reports]
        se = [r.at(tolerance).se for r in reports]
        pp = [r.at(tolerance).pp for r in reports]
        de = [r.at(tolerance).de for r in reports]
        acc_mean, acc_sd = _mean_sd(acc)
        se_mean, se_sd = _mean_sd(se)
        pp_mean, pp_sd = _mean_sd(pp)
        de_mean, de_sd = _mean_sd(de)
        aggregates.append(
            AggregateScores(
                tolerance_ms=tolerance,
                acc_mean=acc_mean,
                acc_sd=acc_sd,
                se_mean=se_mean,
                se_sd=se_sd,
                pp_mean=pp_mean,
                pp_sd=pp_sd,
                de_mean=de_mean,
                de_sd=de_sd,
            )
        )
    return EvalReport(
        recordings=tuple(reports),
        tolerances_ms=tolerances,
        aggregates=tuple(aggregates),
        missed_total=sum(r.missed for r in reports),
        n_total=sum(r.n for r in reports),
        n_recordings=len(reports),
    )


def render_table(report: EvalReport) -> str:
    """Fixed-width text table: one row per recording plus an 'All' row."""
    tolerances = report.tolerances_ms

    def fmt_tol(t: float) -> str:
        return f"{t:g}"

    headers = ["id"]
    headers += [f"Acc{fmt_tol(t)} [%]" for t in tolerances]
    headers += [f"DE{fmt_tol(t)} [%]" for t in tolerances]
    headers += ["Missed", "N"]

    rows = []
    for r in report.recordings:
        row = [r.recording_id]
        row += [f"{r.at(t).acc:.2f}" for t in tolerances]
        row += [f"{r.at(t).de:.2f}" for t in tolerances]
        row += [str(r.missed), str(r.n)]
        rows.append(row)
    all_row = ["All"]
    all_row += [
        f"{report.aggregate_at(t).acc_mean:.2f} ± {report.aggregate_at(t).acc_sd:.2f}"
        for t in tolerances
    ]
    all_row += [
        f"{report.aggregate_at(t).de_mean:.2f} ± {report.aggregate_at(t).de_sd:.2f}"
        for t in tolerances
    ]
    all_row += [str(report.missed_total), str(report.n_total)]
    rows.append(all_row)

    widths = [
        max(len(headers[i]), max(len(row[i]) for row in rows))
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.rjust(widths[i]) if i else h.ljust(widths[i]) for i, h in enumerate(headers))
    ]
    for row in rows:
        lines.append(
            "  ".join(
                cell.rjust(widths[i]) if i else cell.ljust(widths[i])
                for i, cell in enumerate(row)
            )
        )
    return "\n".join(lines) + "\n"
