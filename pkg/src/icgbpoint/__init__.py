"""B-point detection in impedance cardiograms by weighted time windows."""

from .delineate import (
    BeatDetection,
    DetectionMethod,
    DetectorConfig,
    Segment,
    build_weight_window,
    detect_b_points,
    detect_c_points,
    extract_segment,
    fallback_b_point,
    fallback_count,
    locate_mb_point,
    ms_to_samples,
    normalize_segment,
    preprocess,
    transform_segment,
)
from .errors import DataError
from .filters import FilterCoefficients, FilterSpec, design_bandpass, filtfilt, frequency_response
from .io import (
    AnnotationSet,
    DetectionFile,
    Recording,
    export_segments,
    load_annotations,
    load_detections,
    load_recording,
    save_annotations,
    save_detections,
    save_recording,
)
from .metrics import (
    EvalReport,
    MatchResult,
    RecordingReport,
    aggregate,
    detection_error,
    evaluate_recording,
    match_beats,
    positive_predictivity,
    render_table,
    sensitivity,
)
from .peaks import PeakConstraints, find_peaks
from .synth import SynthSpec, synthesize_icg

__version__ = "0.1.0"

__all__ = [
    "AnnotationSet",
    "BeatDetection",
    "DataError",
    "DetectionFile",
    "DetectionMethod",
    "DetectorConfig",
    "EvalReport",
    "FilterCoefficients",
    "FilterSpec",
    "MatchResult",
    "PeakConstraints",
    "Recording",
    "RecordingReport",
    "Segment",
    "SynthSpec",
    "aggregate",
    "build_weight_window",
    "design_bandpass",
    "detect_b_points",
    "detect_c_points",
    "detection_error",
    "evaluate_recording",
    "export_segments",
    "extract_segment",
    "fallback_b_point",
    "fallback_count",
    "filtfilt",
    "find_peaks",
    "frequency_response",
    "load_annotations",
    "load_detections",
    "load_recording",
    "locate_mb_point",
    "match_beats",
    "ms_to_samples",
    "normalize_segment",
    "positive_predictivity",
    "preprocess",
    "render_table",
    "save_annotations",
    "save_detections",
    "save_recording",
    "sensitivity",
    "synthesize_icg",
    "transform_segment",
]
