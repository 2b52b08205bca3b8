"""Synthetic sequence generation: determinism, envelopes, planted apexes."""

import numpy as np
import pytest

from apexlbp.descriptors import DescriptorKind, extract_descriptors
from apexlbp.spotting import fd_curve, spot_apex
from apexlbp.synthesis import (
    SynthSpec,
    envelope_values,
    generate_sequence,
    write_pgm_sequence,
)
from apexlbp.volume import load_manifest, load_sequence


def small_spec(**overrides):
    params = dict(width=24, height=24, depth=16, apex_frame=9, amplitude=40.0, texture_seed=3)
    params.update(overrides)
    return SynthSpec(**params)


class TestSpecValidation:
    def test_zero_radius_rejected(self):
        with pytest.raises(ValueError, match="radius"):
            small_spec(bump_radius=0.0)

    def test_apex_must_leave_room_for_the_ramp(self):
        with pytest.raises(ValueError, match="apex_frame"):
            small_spec(apex_frame=1)
        with pytest.raises(ValueError, match="apex_frame"):
            small_spec(apex_frame=17)

    def test_negative_amplitude_rejected(self):
        with pytest.raises(ValueError, match="amplitude"):
            small_spec(amplitude=-1.0)

    def test_unknown_envelope_rejected(self):
        with pytest.raises(ValueError, match="envelope"):
            small_spec(envelope="boxcar")


class TestEnvelope:
    @pytest.mark.parametrize("shape", ["triangular", "raised-cosine"])
    def test_zero_at_start_peak_at_apex(self, shape):
        spec = small_spec(envelope=shape)
        env = envelope_values(spec)
        assert env[0] == 0.0
        assert env[spec.apex_frame - 1] == 1.0
        assert env.max() == 1.0

    @pytest.mark.parametrize("shape", ["triangular", "raised-cosine"])
    def test_monotone_rise_and_fall(self, shape):
        spec = small_spec(envelope=shape)
        env = envelope_values(spec)
        k = spec.apex_frame - 1
        assert (np.diff(env[: k + 1]) >= 0.0).all()
        assert (np.diff(env[k:]) <= 0.0).all()

    def test_apex_at_final_frame_stays_high(self):
        env = envelope_values(small_spec(apex_frame=16))
        assert env[-1] == 1.0


class TestGeneration:
    def test_same_seed_bit_identical(self):
        a, _ = generate_sequence(small_spec())
        b, _ = generate_sequence(small_spec())
        assert np.array_equal(a.data, b.data)

    def test_different_seed_differs(self):
        a, _ = generate_sequence(small_spec())
        b, _ = generate_sequence(small_spec(texture_seed=4))
        assert not np.array_equal(a.data, b.data)

    def test_zero_amplitude_gives_identical_frames(self):
        volume, _ = generate_sequence(small_spec(amplitude=0.0))
        for t in range(1, volume.depth):
            assert np.array_equal(volume.data[t], volume.data[0])

    def test_zero_amplitude_pipeline_is_flat(self):
        volume, _ = generate_sequence(small_spec(amplitude=0.0))
        descriptors = extract_descriptors(volume, DescriptorKind.LBP_SIPL)
        result = spot_apex(fd_curve(descriptors, kind="lbp-sipl"))
        assert result.flat
        assert result.apex_frame == 1

    def test_annotation_tracks_envelope(self):
        spec = small_spec()
        _, annotation = generate_sequence(spec)
        assert annotation.onset_frame == 2
        assert annotation.apex_frame == spec.apex_frame
        assert annotation.offset_frame == spec.depth - 1

    def test_annotation_with_apex_at_end(self):
        _, annotation = generate_sequence(small_spec(apex_frame=16))
        assert annotation.offset_frame == 16

    def test_intensities_stay_in_range_with_noise(self):
        volume, _ = generate_sequence(small_spec(amplitude=200.0, noise_sigma=30.0))
        assert volume.data.min() >= 0.0
        assert volume.data.max() <= 255.0

    def test_first_frame_is_undeformed_base(self):
        spec = small_spec()
        volume, _ = generate_sequence(spec)
        quiet, _ = generate_sequence(small_spec(amplitude=0.0))
        assert np.array_equal(volume.data[0], quiet.data[0])


class TestPlantedApexRecovery:
    def test_recovers_planted_apex(self):
        spec = small_spec(width=32, height=32, depth=24, apex_frame=13, amplitude=48.0)
        volume, annotation = generate_sequence(spec)
        descriptors = extract_descriptors(volume, DescriptorKind.LBP_SIPL)
        result = spot_apex(fd_curve(descriptors, kind="lbp-sipl"))
        assert abs(result.apex_frame - annotation.apex_frame) <= 1

    def test_raised_cosine_envelope_recovers_too(self):
        spec = small_spec(
            width=32, height=32, depth=28, apex_frame=11, amplitude=48.0,
            envelope="raised-cosine",
        )
        volume, annotation = generate_sequence(spec)
        descriptors = extract_descriptors(volume, DescriptorKind.LBP_SIPL)
        result = spot_apex(fd_curve(descriptors, kind="lbp-sipl"))
        assert abs(result.apex_frame - annotation.apex_frame) <= 1

    def test_peak_fd_never_drops_as_amplitude_grows(self):
        peaks = []
        for amplitude in (0.0, 8.0, 16.0, 32.0, 64.0):
            volume, _ = generate_sequence(small_spec(amplitude=amplitude))
            descriptors = extract_descriptors(volume, DescriptorKind.LBP_SIPL)
            peaks.append(spot_apex(fd_curve(descriptors, kind="lbp-sipl")).peak_value)
        assert all(b >= a for a, b in zip(peaks, peaks[1:]))


class TestPgmExport:
    def test_roundtrip_through_files(self, tmp_path):
        spec = small_spec()
        volume, annotation = generate_sequence(spec)
        manifest_path = write_pgm_sequence(volume, annotation, tmp_path / "seq", "demo")
        manifest = load_manifest(manifest_path)
        assert manifest.sequence_id == "demo"
        assert manifest.ground_truth == annotation
        reloaded = load_sequence(manifest)
        assert (reloaded.width, reloaded.height, reloaded.depth) == (
            spec.width,
            spec.height,
            spec.depth,
        )
        # Files are 8-bit quantized; values differ from the float volume by < 0.5.
        assert np.abs(reloaded.data - volume.data).max() <= 0.5

    def test_export_is_deterministic(self, tmp_path):
        spec = small_spec()
        volume, annotation = generate_sequence(spec)
        p1 = write_pgm_sequence(volume, annotation, tmp_path / "a", "demo")
        p2 = write_pgm_sequence(volume, annotation, tmp_path / "b", "demo")
        assert p1.read_text() == p2.read_text()
        frame = "frame_0001.pgm"
        assert (tmp_path / "a" / frame).read_bytes() == (tmp_path / "b" / frame).read_bytes()
