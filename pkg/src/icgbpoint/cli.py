"""Command-line front door: detect, eval, synth, export-segments, report.

Exit codes: 0 success, 1 data error (unreadable/malformed files, beat count
mismatch), 2 usage error. Output files are written atomically, so a failing
run never leaves partial output behind.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from pathlib import Path

from .delineate import (
    DetectorConfig,
    beat_trace,
    detect_b_points,
    detect_c_points,
    preprocess,
)
from .errors import DataError
from .filters import FilterSpec
from .io import (
    DetectionFile,
    atomic_write_text,
    dump_json,
    export_segments,
    load_annotations,
    load_detections,
    load_recording,
    save_annotations,
    save_detections,
    save_recording,
)
from .metrics import aggregate, evaluate_recording, render_table
from .synth import SynthSpec, synthesize_icg

CONFIG_ENV_VAR = "ICGBPOINT_CONFIG"

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE_ERROR = 2


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("detector configuration")
    group.add_argument("--config", help="JSON config file (default: $ICGBPOINT_CONFIG)")
    group.add_argument("--f-low", type=float, help="band-pass low cutoff in Hz (default 0.5)")
    group.add_argument("--f-high", type=float, help="band-pass high cutoff in Hz (default 50)")
    group.add_argument("--order", type=int, help="Butterworth prototype order (default 3)")
    group.add_argument("--pre-c-window-ms", type=float, help="analysis window before C (default 250)")
    group.add_argument("--c-min-distance-ms", type=float, help="minimum C spacing (default 350)")
    group.add_argument(
        "--c-threshold-std-fraction", type=float,
        help="C height threshold as a fraction of the signal std (default 0.8)",
    )
    group.add_argument("--alpha", type=float, help="constant weight outside the ramp (default 0.1)")
    group.add_argument("--mb-min-peak-distance-ms", type=float, help="MB peak spacing (default 50)")
    group.add_argument(
        "--mb-threshold-divisor", type=float,
        help="MB peak threshold = segment max / divisor (default 2000)",
    )
    group.add_argument(
        "--epsilon-fraction", type=float,
        help="fallback band as a fraction of segment peak-to-peak (default 0.05)",
    )


def _config_from_args(args: argparse.Namespace) -> DetectorConfig:
    config_path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            try:
                config = DetectorConfig.from_dict(json.load(fh))
            except (json.JSONDecodeError, TypeError, ValueError) as exc:
                raise DataError(f"{config_path}: bad config file: {exc}") from exc
    else:
        config = DetectorConfig()

    filt = config.filter
    if args.order is not None or args.f_low is not None or args.f_high is not None:
        filt = FilterSpec(
            order=args.order if args.order is not None else filt.order,
            f_low=args.f_low if args.f_low is not None else filt.f_low,
            f_high=args.f_high if args.f_high is not None else filt.f_high,
            fs=filt.fs,
        )
    overrides = {}
    for name in (
        "pre_c_window_ms",
        "c_min_distance_ms",
        "c_threshold_std_fraction",
        "alpha",
        "mb_min_peak_distance_ms",
        "mb_threshold_divisor",
        "epsilon_fraction",
    ):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    base = config.to_dict()
    base.pop("filter")
    base.update(overrides)
    return DetectorConfig(filter=filt, **{k: float(v) for k, v in base.items()})


def _cmd_detect(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    recording = load_recording(args.infile, fs_override=args.fs_override)
    detections = detect_b_points(recording, config)
    save_detections(
        DetectionFile(
            recording_id=recording.id,
            fs=recording.fs,
            beats=detections,
            config=config,
        ),
        args.out,
    )
    if args.traces_out:
        beat_indices = _parse_beat_list(args.trace_beats, len(detections))
        filtered = preprocess(recording.samples, recording.fs, config)
        traces = [
            beat_trace(filtered, detections[i].c_index, recording.fs, config)
            for i in beat_indices
        ]
        dump_json(args.traces_out, {"recording_id": recording.id, "traces": traces})
    print(f"wrote {len(detections)} detections to {args.out}")
    return EXIT_OK


def _parse_beat_list(text: str, n_beats: int) -> list[int]:
    if not text:
        return list(range(min(n_beats, 1)))
    indices = []
    for token in text.split(","):
        i = int(token)
        if not 0 <= i < n_beats:
            raise DataError(f"beat index {i} out of range (recording has {n_beats} beats)")
        indices.append(i)
    return indices


def _evaluate_one(
    recording_path: str,
    annotation_path: str,
    config: DetectorConfig,
    tolerances: tuple[float, ...],
):
    recording = load_recording(recording_path)
    annotations = load_annotations(annotation_path)
    detections = detect_b_points(recording, config)
    return evaluate_recording(
        detections, annotations, recording.fs, tolerances, recording_id=recording.id
    )


def _cmd_eval(args: argparse.Namespace) -> int:
    tolerances = tuple(args.tol) if args.tol else (30.0, 150.0)
    annotations = load_annotations(args.ann)
    if args.det:
        detection_file = load_detections(args.det)
        report = evaluate_recording(
            detection_file.beats,
            annotations,
            detection_file.fs,
            tolerances,
            recording_id=detection_file.recording_id,
        )
    elif args.infile:
        config = _config_from_args(args)
        recording = load_recording(args.infile)
        detections = detect_b_points(recording, config)
        report = evaluate_recording(
            detections, annotations, recording.fs, tolerances, recording_id=recording.id
        )
    else:
        print("eval: need --det or --in", file=sys.stderr)
        return EXIT_USAGE_ERROR
    full = aggregate([report])
    if args.out:
        dump_json(args.out, full.to_dict())
    print(render_table(full), end="")
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec(
        fs=args.fs,
        n_beats=args.beats,
        heart_rate_bpm=args.heart_rate,
        b_to_c_ms=args.b_to_c_ms,
        notch_depth=args.notch_depth,
        noise_rms=args.noise_rms,
        rr_jitter_pct=args.rr_jitter_pct,
        seed=args.seed,
    )
    recording, truth = synthesize_icg(spec)
    if args.id:
        recording.id = args.id
        truth.recording_id = args.id
    save_recording(recording, args.out)
    save_annotations(truth, args.ann_out)
    print(
        f"wrote {recording.samples.size} samples ({recording.duration_s:.2f} s) to "
        f"{args.out} and {len(truth.b_points)} ground-truth beats to {args.ann_out}"
    )
    return EXIT_OK


def _cmd_export_segments(args: argparse.Namespace) -> int:
    recording = load_recording(args.infile)
    if args.det:
        c_points = [
            b.c_index for b in load_detections(args.det).beats
        ]
    else:
        config = _config_from_args(args)
        filtered = preprocess(recording.samples, recording.fs, config)
        c_points = [int(c) for c in detect_c_points(filtered, recording.fs, config)]
    count = export_segments(recording, c_points, args.pre, args.post, args.out)
    print(f"wrote {count} segments to {args.out}")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    with open(args.manifest, encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{args.manifest}: not valid JSON: {exc}") from exc
    entries = manifest.get("recordings")
    if not isinstance(entries, list) or not entries:
        raise DataError(f"{args.manifest}: expected a non-empty 'recordings' list")
    base = Path(args.manifest).parent
    pairs = []
    for entry in entries:
        try:
            pairs.append(
                (str(base / entry["recording"]), str(base / entry["annotations"]))
            )
        except (KeyError, TypeError) as exc:
            raise DataError(
                f"{args.manifest}: each entry needs 'recording' and 'annotations': {exc}"
            ) from exc

    config = _config_from_args(args)
    tolerances = tuple(args.tol) if args.tol else (30.0, 150.0)
    jobs = max(1, args.jobs)
    if jobs == 1 or len(pairs) == 1:
        reports = [_evaluate_one(r, a, config, tolerances) for r, a in pairs]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(
                pool.map(lambda pair: _evaluate_one(*pair, config, tolerances), pairs)
            )
    full = aggregate(reports)
    table = render_table(full)
    if args.out:
        atomic_write_text(args.out, table)
    if args.json_out:
        dump_json(args.json_out, full.to_dict())
    print(table, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icgbpoint",
        description="Detect and evaluate B-points in impedance cardiograms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="run the detector on a recording")
    p_detect.add_argument("--in", dest="infile", required=True, help="recording file")
    p_detect.add_argument("--out", required=True, help="detection JSON to write")
    p_detect.add_argument("--fs-override", type=float, help="override the header sampling rate")
    p_detect.add_argument("--traces-out", help="write per-beat diagnostic traces to this JSON file")
    p_detect.add_argument(
        "--trace-beats", default="", help="comma-separated beat indices for --traces-out (default: 0)"
    )
    _add_config_flags(p_detect)
    p_detect.set_defaults(func=_cmd_detect)

    p_eval = sub.add_parser("eval", help="score detections against annotations")
    p_eval.add_argument("--det", help="detection JSON (from `detect`)")
    p_eval.add_argument("--in", dest="infile", help="recording file (detect inline instead of --det)")
    p_eval.add_argument("--ann", required=True, help="annotation JSON")
    p_eval.add_argument("--out", help="evaluation report JSON to write")
    p_eval.add_argument(
        "--tol", type=float, action="append",
        help="tolerance in ms, repeatable (default: 30 and 150)",
    )
    _add_config_flags(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_synth = sub.add_parser("synth", help="generate a synthetic recording with ground truth")
    p_synth.add_argument("--out", required=True, help="recording file to write")
    p_synth.add_argument("--ann-out", required=True, help="ground-truth annotation JSON to write")
    p_synth.add_argument("--fs", type=float, default=2000.0)
    p_synth.add_argument("--beats", type=int, default=60)
    p_synth.add_argument("--heart-rate", type=float, default=72.0)
    p_synth.add_argument("--b-to-c-ms", type=float, default=60.0)
    p_synth.add_argument("--notch-depth", type=float, default=0.35)
    p_synth.add_argument("--noise-rms", type=float, default=0.0)
    p_synth.add_argument("--rr-jitter-pct", type=float, default=0.0)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--id", help="recording id (default: synth-<seed>)")
    p_synth.set_defaults(func=_cmd_synth)

    p_export = sub.add_parser(
        "export-segments", help="write per-beat segments for the annotator UI"
    )
    p_export.add_argument("--in", dest="infile", required=True, help="recording file")
    p_export.add_argument("--det", help="take C-points from this detection JSON")
    p_export.add_argument("--out", required=True, help="segments JSON to write")
    p_export.add_argument("--pre", type=float, default=0.25, help="seconds before C (default 0.25)")
    p_export.add_argument("--post", type=float, default=0.5, help="seconds after C (default 0.5)")
    _add_config_flags(p_export)
    p_export.set_defaults(func=_cmd_export_segments)

    p_report = sub.add_parser(
        "report", help="evaluate many recordings and render a summary table"
    )
    p_report.add_argument(
        "--manifest", required=True,
        help="JSON manifest: {\"recordings\": [{\"recording\": path, \"annotations\": path}, ...]}",
    )
    p_report.add_argument("--out", help="text table to write")
    p_report.add_argument("--json-out", help="full report JSON to write")
    p_report.add_argument(
        "--tol", type=float, action="append",
        help="tolerance in ms, repeatable (default: 30 and 150)",
    )
    p_report.add_argument("--jobs", type=int, default=4, help="parallel workers (default 4)")
    _add_config_flags(p_report)
    p_report.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
