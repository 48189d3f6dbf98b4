"""Native file formats: recordings, annotations, detections, beat segments.

Recordings are plain UTF-8 text: a single header line
``# fs=<Hz> unit=<text> id=<text>`` followed by one amplitude per line.
Annotations, detections and exported segments are JSON. All writers go
through a temp-file-and-rename step so a failed write never leaves a partial
file behind.
"""

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .delineate import BeatDetection, DetectionMethod, DetectorConfig
from .errors import DataError

log = logging.getLogger(__name__)


@dataclass
class Recording:
    """A uniformly sampled single-channel ICG time series."""

    id: str
    fs: float
    samples: np.ndarray
    unit: str = "Ohm/s"

    def __post_init__(self) -> None:
        if self.fs <= 0.0:
            raise ValueError(f"fs must be positive, got {self.fs}")
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.fs


@dataclass
class AnnotationSet:
    """Human-labeled B-point (and optionally C-point) sample indices."""

    recording_id: str
    b_points: list[int]
    c_points: list[int] | None = None
    annotator: str = ""
    created_at: str = ""


@dataclass
class DetectionFile:
    """Detector output for one recording, with the config that produced it."""

    recording_id: str
    fs: float
    beats: list[BeatDetection]
    config: DetectorConfig = field(default_factory=DetectorConfig)

    def __post_init__(self) -> None:
        c_indices = [b.c_index for b in self.beats]
        if any(b >= a for b, a in zip(c_indices, c_indices[1:])):
            raise DataError("beats must be ordered by strictly ascending c_index")


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file in the same directory."""
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(
        dir=path.parent if str(path.parent) else ".", prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def dump_json(path: str | Path, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _load_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DataError(f"{path}: expected a JSON object at top level")
    return data


def load_recording(path: str | Path, fs_override: float | None = None) -> Recording:
    """Load a recording from the native text format.

    The first line must be a ``#``-prefixed header of space-separated
    ``key=value`` pairs; ``fs`` is required there unless ``fs_override`` is
    given (the override always wins). Every following non-empty line is one
    sample.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise DataError(f"{path}: missing '# fs=... ' header line")
        meta: dict[str, str] = {}
        for token in header[1:].split():
            if "=" not in token:
                raise DataError(f"{path}: malformed header token {token!r}")
            key, _, value = token.partition("=")
            meta[key] = value

        if fs_override is not None:
            fs = float(fs_override)
        elif "fs" in meta:
            try:
                fs = float(meta["fs"])
            except ValueError as exc:
                raise DataError(f"{path}: bad header fs value {meta['fs']!r}") from exc
        else:
            raise DataError(f"{path}: header has no fs and no override was given")
        if fs <= 0.0:
            raise DataError(f"{path}: fs must be positive, got {fs}")

        samples: list[float] = []
        for lineno, line in enumerate(fh, start=2):
            text = line.strip()
            if not text:
                continue
            try:
                value = float(text)
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: not a number: {text!r}") from exc
            if not math.isfinite(value):
                raise DataError(f"{path}: line {lineno}: non-finite sample {text!r}")
            samples.append(value)

    if not samples:
        raise DataError(f"{path}: no samples")
    return Recording(
        id=meta.get("id", path.stem),
        fs=fs,
        samples=np.array(samples, dtype=float),
        unit=meta.get("unit", "Ohm/s"),
    )


def save_recording(recording: Recording, path: str | Path) -> None:
    """Write a recording in the native text format."""
    lines = [f"# fs={recording.fs!r} unit={recording.unit} id={recording.id}"]
    lines.extend(repr(float(v)) for v in recording.samples)
    atomic_write_text(path, "\n".join(lines) + "\n")


def _check_indices(raw: list, name: str, path: Path) -> list[int]:
    """Validate one annotation index list: ints, non-negative, ascending.

    Adjacent duplicates (double clicks) are collapsed with a warning; any
    other ordering violation is an error, never silently repaired.
    """
    indices: list[int] = []
    for value in raw:
        if isinstance(value, bool) or not isinstance(value, int):
            raise DataError(f"{path}: {name} must contain integers, got {value!r}")
        if value < 0:
            raise DataError(f"{path}: {name} contains negative index {value}")
        indices.append(value)
    collapsed = [v for i, v in enumerate(indices) if i == 0 or v != indices[i - 1]]
    duplicates = len(indices) - len(collapsed)
    if duplicates:
        log.warning("%s: collapsed %d duplicate %s entries", path, duplicates, name)
    if any(b >= a for b, a in zip(collapsed, collapsed[1:])):
        raise DataError(f"{path}: {name} indices not ascending")
    return collapsed


def load_annotations(path: str | Path) -> AnnotationSet:
    """Load an annotation file (JSON), validating index ordering."""
    path = Path(path)
    data = _load_json(path)
    if "b_points" not in data:
        raise DataError(f"{path}: missing b_points")
    b_points = _check_indices(data["b_points"], "b_points", path)
    c_points = None
    if data.get("c_points") is not None:
        c_points = _check_indices(data["c_points"], "c_points", path)
        if len(c_points) != len(b_points):
            raise DataError(
                f"{path}: beat count mismatch: {len(b_points)} b_points vs "
                f"{len(c_points)} c_points"
            )
    return AnnotationSet(
        recording_id=str(data.get("recording_id", "")),
        b_points=b_points,
        c_points=c_points,
        annotator=str(data.get("annotator", "")),
        created_at=str(data.get("created_at", "")),
    )


def save_annotations(annotations: AnnotationSet, path: str | Path) -> None:
    payload = {
        "recording_id": annotations.recording_id,
        "annotator": annotations.annotator,
        "created_at": annotations.created_at,
        "b_points": list(annotations.b_points),
        "c_points": list(annotations.c_points) if annotations.c_points is not None else None,
    }
    dump_json(path, payload)


def load_detections(path: str | Path) -> DetectionFile:
    path = Path(path)
    data = _load_json(path)
    try:
        beats = [
            BeatDetection(
                c_index=int(b["c_index"]),
                b_index=None if b["b_index"] is None else int(b["b_index"]),
                method=DetectionMethod(b["method"]),
                transformed_peaks=(
                    tuple(b["transformed_peaks"]) if b.get("transformed_peaks") else None
                ),
            )
            for b in data["beats"]
        ]
        return DetectionFile(
            recording_id=str(data["recording_id"]),
            fs=float(data["fs"]),
            beats=beats,
            config=DetectorConfig.from_dict(data["config"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: malformed detection file: {exc}") from exc


def save_detections(detections: DetectionFile, path: str | Path) -> None:
    payload = {
        "recording_id": detections.recording_id,
        "fs": detections.fs,
        "config": detections.config.to_dict(),
        "beats": [
            {
                "c_index": b.c_index,
                "b_index": b.b_index,
                "method": b.method.value,
                "transformed_peaks": (
                    list(b.transformed_peaks) if b.transformed_peaks else None
                ),
            }
            for b in detections.beats
        ],
    }
    dump_json(path, payload)


def export_segments(
    recording: Recording,
    c_points: list[int] | np.ndarray,
    pre_s: float,
    post_s: float,
    path: str | Path,
) -> int:
    """Write per-beat segments around each C-point for the annotator UI.

    Each segment spans ``[c - pre_s, c + post_s)`` in samples; windows that
    would leave the recording are clipped and flagged. The payload carries no
    detector output beyond the C anchor, keeping the annotator blinded.

    Returns:
        The number of segments written.
    """
    if pre_s < 0.0 or post_s < 0.0:
        raise ValueError(f"pre_s and post_s must be >= 0, got {pre_s}, {post_s}")
    n = recording.samples.size
    pre = int(math.floor(pre_s * recording.fs + 0.5))
    post = int(math.floor(post_s * recording.fs + 0.5))
    segments = []
    for c in c_points:
        c = int(c)
        if not 0 <= c < n:
            raise DataError(f"c_point {c} outside recording of {n} samples")
        start, stop = c - pre, c + post
        clipped = start < 0 or stop > n
        start, stop = max(start, 0), min(stop, n)
        segments.append(
            {
                "c_index": c,
                "start_index": start,
                "samples": [float(v) for v in recording.samples[start:stop]],
                "clipped": clipped,
            }
        )
    payload = {
        "recording_id": recording.id,
        "fs": recording.fs,
        "unit": recording.unit,
        "pre_s": pre_s,
        "post_s": post_s,
        "segments": segments,
    }
    dump_json(path, payload)
    return len(segments)
