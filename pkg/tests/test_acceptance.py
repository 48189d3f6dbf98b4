"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines alongside pytest's own verdicts.
"""

import shutil
import subprocess
import time
from pathlib import Path

import numpy as np
import pytest

from icgbpoint import (
    DetectionFile,
    DetectorConfig,
    FilterSpec,
    PeakConstraints,
    Segment,
    SynthSpec,
    design_bandpass,
    detect_b_points,
    detection_error,
    export_segments,
    filtfilt,
    find_peaks,
    load_annotations,
    positive_predictivity,
    save_detections,
    sensitivity,
    synthesize_icg,
    build_weight_window,
)

REPO_ROOT = Path(__file__).resolve().parent.parent


def report(line):
    print(f"ACCEPTANCE PASS: {line}")


def test_criterion_metric_formulas():
    """Eqs. for Se/PP/DE match a direct arithmetic oracle on 10,000 triples."""
    rng = np.random.default_rng(2024)
    started = time.perf_counter()
    triples = rng.integers(0, 5000, size=(10_000, 3))
    for tp, fd, md in triples:
        tp, fd, md = int(tp), int(fd), int(md)
        if tp + fd > 0:
            assert sensitivity(tp, fd) == 100.0 * tp / (tp + fd)
            assert detection_error(tp, fd, md) == 100.0 * (fd + md) / (tp + fd)
            assert abs(sensitivity(tp, fd) + detection_error(tp, fd, 0) - 100.0) < 1e-12
        if tp + md > 0:
            assert positive_predictivity(tp, md) == 100.0 * tp / (tp + md)
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"metric formula check took {elapsed:.2f} s"
    report(f"metric formulas exact on 10,000 random triples in {elapsed:.2f} s")


def brute_force_peaks(x, min_distance, min_height):
    n = len(x)
    candidates = []
    for i in range(1, n - 1):
        if x[i] < min_height or x[i] <= x[i - 1]:
            continue
        j = i
        while j + 1 < n and x[j + 1] == x[i]:
            j += 1
        if j + 1 < n and x[j + 1] < x[i]:
            candidates.append(i)
    candidates.sort(key=lambda k: (-x[k], k))
    accepted = []
    for i in candidates:
        if all(abs(i - k) >= max(min_distance, 1) for k in accepted):
            accepted.append(i)
    return sorted(accepted)


def test_criterion_peak_detector_oracle_equivalence():
    """find_peaks equals the brute-force greedy oracle on 1,000 sequences."""
    rng = np.random.default_rng(7)
    started = time.perf_counter()
    for trial in range(1000):
        length = int(rng.integers(0, 501))
        x = rng.normal(size=length)
        if trial % 3 == 0:
            x = np.round(x, 1)  # quantize to force plateaus
        min_distance = int(rng.integers(0, 40))
        min_height = float(rng.normal(scale=0.5))
        got = list(
            find_peaks(x, PeakConstraints(min_distance=min_distance, min_height=min_height))
        )
        want = brute_force_peaks(list(x), min_distance, min_height)
        assert got == want, f"trial {trial}: {got} != {want}"
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"peak oracle check took {elapsed:.2f} s"
    report(f"peak detector matches brute-force oracle on 1,000 sequences in {elapsed:.2f} s")


def test_criterion_window_law():
    """max(w) - min(w) = h + alpha on 1,000 random non-degenerate segments."""
    rng = np.random.default_rng(99)
    checked = 0
    while checked < 1000:
        length = int(rng.integers(4, 300))
        raw = rng.normal(scale=rng.uniform(0.01, 100.0), size=length)
        segment = Segment(
            start_index=0,
            raw=raw,
            shifted=raw - raw.min(),
            h=float(raw.max() - raw.min()),
            argmin_local=int(np.argmin(raw)),
            argmax_local=int(np.argmax(raw)),
        )
        for alpha in (0.01, 0.1, 1.0):
            weights = build_weight_window(segment, alpha)
            if weights is None:
                break
            span = weights.max() - weights.min()
            assert span == pytest.approx(segment.h + alpha, rel=1e-9)
        else:
            checked += 1
    report("window law h + alpha holds on 1,000 random segments x 3 alphas")


def test_criterion_scale_invariance():
    """detect_b_points(c*x) is beat-identical to detect_b_points(x)."""
    config = DetectorConfig()
    for seed in range(100):
        spec = SynthSpec(
            n_beats=8,
            heart_rate_bpm=66.0 + (seed % 7) * 6.0,
            noise_rms=0.03 if seed % 2 else 0.0,
            rr_jitter_pct=4.0 if seed % 3 == 0 else 0.0,
            seed=seed,
        )
        recording, _ = synthesize_icg(spec)
        base = [
            (d.c_index, d.b_index, d.method) for d in detect_b_points(recording, config)
        ]
        for factor in (0.5, 2.0, 10.0):
            scaled = type(recording)(
                id=recording.id,
                fs=recording.fs,
                samples=recording.samples * factor,
                unit=recording.unit,
            )
            got = [
                (d.c_index, d.b_index, d.method) for d in detect_b_points(scaled, config)
            ]
            assert got == base, f"seed {seed}, factor {factor}"
    report("scale invariance holds for 100 recordings x factors {0.5, 2, 10}")


def test_criterion_zero_phase():
    """10 Hz tone: zero cross-correlation lag, passband ratio within 2%."""
    fs = 2000.0
    coeffs = design_bandpass(FilterSpec(order=3, f_low=0.5, f_high=50.0, fs=fs))
    t = np.arange(int(10 * fs)) / fs
    x = np.sin(2 * np.pi * 10.0 * t)
    y = filtfilt(coeffs, x)
    core = slice(2000, -2000)
    corr = np.correlate(y[core], x[core], mode="full")
    lag = int(np.argmax(corr)) - (x[core].size - 1)
    assert lag == 0
    phasor = np.exp(-2j * np.pi * 10.0 * t[core])
    ratio = np.abs(np.sum(y[core] * phasor)) / np.abs(np.sum(x[core] * phasor))
    assert abs(ratio - 1.0) <= 0.02
    report(f"zero phase: lag 0 samples, passband amplitude ratio {ratio:.5f}")


def test_criterion_end_to_end_noise_free():
    """60 clean beats: every B-point within +/-30 ms, detection under 1 s."""
    recording, truth = synthesize_icg(SynthSpec(n_beats=60, seed=1))
    assert recording.duration_s >= 50.0
    config = DetectorConfig()
    started = time.perf_counter()
    detections = detect_b_points(recording, config)
    elapsed = time.perf_counter() - started
    assert len(detections) == 60
    errors = [
        abs(d.b_index - b) * 1000.0 / recording.fs
        for d, b in zip(detections, truth.b_points)
    ]
    assert max(errors) <= 30.0
    assert elapsed < 1.0, f"detection took {elapsed:.2f} s"
    report(
        f"noise-free: 60/60 B-points within 30 ms (max {max(errors):.1f} ms) "
        f"in {elapsed * 1000:.0f} ms"
    )


def test_criterion_end_to_end_noisy():
    """5% noise: >= 95% within +/-30 ms and 100% within +/-150 ms."""
    recording, truth = synthesize_icg(SynthSpec(n_beats=60, noise_rms=0.05, seed=2))
    detections = detect_b_points(recording, DetectorConfig())
    assert len(detections) == 60
    errors = [
        abs(d.b_index - b) * 1000.0 / recording.fs
        for d, b in zip(detections, truth.b_points)
    ]
    within_30 = np.mean([e <= 30.0 for e in errors])
    within_150 = np.mean([e <= 150.0 for e in errors])
    assert within_30 >= 0.95
    assert within_150 == 1.0
    report(
        f"5% noise: {within_30 * 100:.1f}% within 30 ms, "
        f"{within_150 * 100:.0f}% within 150 ms"
    )


def test_criterion_determinism(tmp_path):
    """Identical input produces bit-identical detection files."""
    recording, _ = synthesize_icg(SynthSpec(n_beats=20, noise_rms=0.05, seed=3))
    config = DetectorConfig()
    paths = []
    for run in range(2):
        detections = DetectionFile(
            recording_id=recording.id,
            fs=recording.fs,
            beats=detect_b_points(recording, config),
            config=config,
        )
        path = tmp_path / f"run{run}.json"
        save_detections(detections, path)
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    report("determinism: repeated runs write bit-identical detection files")


def test_criterion_dataset_regression():
    """Stretch criterion: reproduce the published per-subject tables."""
    pytest.skip(
        "external dataset not present in this environment; convert it to the "
        "native format and run `icgbpoint report --manifest ...` (see README)"
    )


def test_criterion_annotator_round_trip(tmp_path):
    """Secondary: scripted UI session labeling 50 segments round-trips."""
    node = shutil.which("node")
    harness = REPO_ROOT / "frontend" / "dist" / "scripts" / "scripted-session.js"
    if node is None or not harness.exists():
        pytest.skip("frontend not built or node unavailable (run `npm run build` in frontend/)")

    recording, truth = synthesize_icg(SynthSpec(n_beats=50, seed=12))
    segments_path = tmp_path / "segments.json"
    export_segments(recording, truth.c_points, 0.25, 0.5, segments_path)

    # Blinding: the exported payload must carry no detector output fields.
    import json

    payload = json.loads(segments_path.read_text())
    for segment in payload["segments"]:
        assert set(segment) == {"c_index", "start_index", "samples", "clipped"}

    out_path = tmp_path / "annotations.json"
    clicks = [int(c) - 117 for c in truth.c_points]  # arbitrary in-segment picks
    clicks_path = tmp_path / "clicks.json"
    clicks_path.write_text(json.dumps(clicks))
    subprocess.run(
        [node, str(harness), str(segments_path), str(clicks_path), str(out_path)],
        check=True,
        capture_output=True,
        text=True,
    )
    loaded = load_annotations(out_path)
    assert loaded.b_points == sorted(clicks)
    assert len(loaded.b_points) == 50
    report("annotator round-trip: 50 scripted clicks survive export + load exactly")
