import numpy as np
import pytest

from icgbpoint import DetectorConfig, SynthSpec, detect_b_points, ms_to_samples, synthesize_icg


class TestSpecValidation:
    def test_heart_rate_at_the_c_spacing_bound_rejected(self):
        with pytest.raises(ValueError, match="heart_rate_bpm"):
            SynthSpec(heart_rate_bpm=180.0)

    def test_notch_must_stay_inside_analysis_window(self):
        with pytest.raises(ValueError, match="b_to_c_ms"):
            SynthSpec(b_to_c_ms=260.0)

    def test_jitter_cannot_exceed_rate_bound(self):
        SynthSpec(heart_rate_bpm=160.0, rr_jitter_pct=5.0)
        with pytest.raises(ValueError, match="jitter"):
            SynthSpec(heart_rate_bpm=165.0, rr_jitter_pct=10.0)

    def test_negative_noise_rejected(self):
        with pytest.raises(ValueError, match="noise_rms"):
            SynthSpec(noise_rms=-0.1)


class TestGroundTruth:
    def test_b_precedes_c_by_exactly_the_configured_interval(self):
        spec = SynthSpec(n_beats=10, heart_rate_bpm=72.0, b_to_c_ms=60.0)
        _, truth = synthesize_icg(spec)
        assert len(truth.b_points) == len(truth.c_points) == 10
        offset = ms_to_samples(60.0, spec.fs)
        assert offset == 120
        assert all(c - b == offset for b, c in zip(truth.b_points, truth.c_points))

    def test_duration_matches_beat_count(self):
        spec = SynthSpec(n_beats=10, heart_rate_bpm=72.0)
        recording, _ = synthesize_icg(spec)
        # 9 intervals of 60/72 s plus one second of lead-in and tail each
        assert recording.duration_s == pytest.approx(9 * 60 / 72 + 2.0, abs=0.01)

    def test_same_spec_same_seed_is_bit_identical(self):
        spec = SynthSpec(n_beats=5, noise_rms=0.05, rr_jitter_pct=5.0, seed=42)
        first, truth_a = synthesize_icg(spec)
        second, truth_b = synthesize_icg(spec)
        assert np.array_equal(first.samples, second.samples)
        assert truth_a == truth_b

    def test_different_seeds_differ(self):
        a, _ = synthesize_icg(SynthSpec(n_beats=5, noise_rms=0.05, seed=1))
        b, _ = synthesize_icg(SynthSpec(n_beats=5, noise_rms=0.05, seed=2))
        assert not np.array_equal(a.samples, b.samples)

    def test_jitter_spreads_intervals(self):
        spec = SynthSpec(n_beats=30, rr_jitter_pct=8.0, seed=3)
        _, truth = synthesize_icg(spec)
        intervals = np.diff(truth.c_points)
        assert intervals.std() > 0
        nominal = 60.0 / spec.heart_rate_bpm * spec.fs
        assert np.all(np.abs(intervals - nominal) <= nominal * 0.081)


class TestPipelineOracle:
    def test_noise_free_recovery(self):
        recording, truth = synthesize_icg(SynthSpec(n_beats=30, seed=9))
        detections = detect_b_points(recording, DetectorConfig())
        assert len(detections) == 30
        c_err = [
            abs(d.c_index - c) * 1000 / recording.fs
            for d, c in zip(detections, truth.c_points)
        ]
        b_err = [
            abs(d.b_index - b) * 1000 / recording.fs
            for d, b in zip(detections, truth.b_points)
        ]
        assert max(c_err) <= 10.0
        assert max(b_err) <= 30.0

    def test_noise_degrades_gracefully(self):
        recording, truth = synthesize_icg(SynthSpec(n_beats=40, noise_rms=0.05, seed=10))
        detections = detect_b_points(recording, DetectorConfig())
        assert len(detections) == 40
        b_err = [
            abs(d.b_index - b) * 1000 / recording.fs
            for d, b in zip(detections, truth.b_points)
        ]
        within_30 = np.mean([e <= 30.0 for e in b_err])
        assert within_30 >= 0.95
        assert max(b_err) <= 150.0
