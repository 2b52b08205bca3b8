"""Sequence loading, manifests, annotations and the GrayVolume contract."""

import json

import numpy as np
import pytest
from PIL import Image

from apexlbp.volume import (
    Annotation,
    GrayVolume,
    SequenceLoadError,
    SequenceManifest,
    load_corpus,
    load_manifest,
    load_sequence,
    manifest_from_directory,
    validate_annotation,
)

LUMA_RED = 0.299 * 255.0  # oracle for a pure-red pixel


def write_gray(path, array):
    Image.fromarray(np.asarray(array, dtype=np.uint8), mode="L").save(path)


def write_rgb(path, array):
    Image.fromarray(np.asarray(array, dtype=np.uint8), mode="RGB").save(path)


@pytest.fixture
def gray_sequence(tmp_path):
    frame = np.arange(64, dtype=np.uint8).reshape(8, 8)
    paths = []
    for i in range(5):
        path = tmp_path / f"frame_{i:02d}.png"
        write_gray(path, frame)
        paths.append(path)
    return SequenceManifest(sequence_id="gray5", frame_paths=paths), frame


class TestLoadSequence:
    def test_identical_gray_frames(self, gray_sequence):
        manifest, frame = gray_sequence
        volume = load_sequence(manifest)
        assert (volume.width, volume.height, volume.depth) == (8, 8, 5)
        for t in range(5):
            assert np.array_equal(volume.data[t], frame.astype(np.float64))

    def test_grayscale_conversion_is_identity(self, gray_sequence):
        manifest, frame = gray_sequence
        volume = load_sequence(manifest)
        assert np.array_equal(volume.data[0], frame.astype(np.float64))

    def test_pure_red_luma(self, tmp_path):
        rgb = np.zeros((4, 4, 3), dtype=np.uint8)
        rgb[..., 0] = 255
        path = tmp_path / "red.png"
        write_rgb(path, rgb)
        volume = load_sequence(SequenceManifest("red", [path]))
        assert volume.data[0] == pytest.approx(np.full((4, 4), LUMA_RED), abs=1e-9)

    def test_dimension_mismatch_names_frame(self, tmp_path):
        a = tmp_path / "a.png"
        b = tmp_path / "b.png"
        write_gray(a, np.zeros((10, 10)))
        write_gray(b, np.zeros((12, 12)))
        with pytest.raises(SequenceLoadError, match="b.png"):
            load_sequence(SequenceManifest("mismatch", [a, b]))

    def test_missing_file_names_path(self, tmp_path):
        missing = tmp_path / "nope.png"
        with pytest.raises(SequenceLoadError, match="nope.png"):
            load_sequence(SequenceManifest("missing", [missing]))

    def test_corrupt_file_names_path(self, tmp_path):
        bad = tmp_path / "bad.png"
        bad.write_bytes(b"this is not an image")
        with pytest.raises(SequenceLoadError, match="bad.png"):
            load_sequence(SequenceManifest("corrupt", [bad]))

    def test_rejects_16bit(self, tmp_path):
        path = tmp_path / "deep.png"
        Image.fromarray(np.zeros((4, 4), dtype=np.uint16)).save(path)
        with pytest.raises(SequenceLoadError, match="mode"):
            load_sequence(SequenceManifest("deep", [path]))

    def test_pgm_roundtrip(self, tmp_path):
        frame = np.arange(64, dtype=np.uint8).reshape(8, 8)
        path = tmp_path / "frame.pgm"
        write_gray(path, frame)
        volume = load_sequence(SequenceManifest("pgm", [path]))
        assert np.array_equal(volume.data[0], frame.astype(np.float64))

    def test_loading_is_deterministic(self, gray_sequence):
        manifest, _ = gray_sequence
        v1 = load_sequence(manifest)
        v2 = load_sequence(manifest)
        assert np.array_equal(v1.data, v2.data)

    def test_depth_equals_frame_count(self, gray_sequence):
        manifest, _ = gray_sequence
        assert load_sequence(manifest).depth == len(manifest.frame_paths)


class TestGrayVolume:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="255"):
            GrayVolume(np.full((2, 4, 4), 300.0))

    def test_rejects_wrong_rank(self):
        with pytest.raises(ValueError, match="3-D"):
            GrayVolume(np.zeros((4, 4)))

    def test_rejects_non_finite(self):
        data = np.zeros((1, 3, 3))
        data[0, 1, 1] = np.nan
        with pytest.raises(ValueError, match="finite"):
            GrayVolume(data)

    def test_data_is_frozen(self):
        volume = GrayVolume(np.zeros((2, 3, 3)))
        with pytest.raises(ValueError):
            volume.data[0, 0, 0] = 1.0

    def test_value_accessor_is_one_based(self):
        data = np.zeros((2, 3, 4))
        data[1, 2, 3] = 42.0
        volume = GrayVolume(data)
        assert volume.value(x=4, y=3, z=2) == 42.0


class TestValidateAnnotation:
    @pytest.fixture
    def volume(self):
        return GrayVolume(np.zeros((30, 4, 4)))

    def test_consistent_annotation(self, volume):
        assert validate_annotation(Annotation(1, 12, 20), volume) == []

    def test_offset_exceeds_depth(self):
        volume = GrayVolume(np.zeros((15, 4, 4)))
        problems = validate_annotation(Annotation(1, 12, 20), volume)
        assert problems == ["offset exceeds depth"]

    def test_apex_before_onset(self, volume):
        problems = validate_annotation(Annotation(5, 3, 9), volume)
        assert "apex before onset" in problems

    def test_never_raises(self, volume):
        problems = validate_annotation(Annotation(-3, -5, 900), volume)
        assert len(problems) >= 2


class TestManifestParsing:
    def test_manifest_relative_paths(self, tmp_path):
        write_gray(tmp_path / "f1.png", np.zeros((4, 4)))
        write_gray(tmp_path / "f2.png", np.zeros((4, 4)))
        manifest_path = tmp_path / "seq.json"
        manifest_path.write_text(
            json.dumps(
                {
                    "sequence_id": "demo",
                    "frames": ["f1.png", "f2.png"],
                    "onset": 1,
                    "apex": 2,
                    "offset": 2,
                }
            )
        )
        manifest = load_manifest(manifest_path)
        assert manifest.sequence_id == "demo"
        assert [p.name for p in manifest.frame_paths] == ["f1.png", "f2.png"]
        assert manifest.ground_truth == Annotation(1, 2, 2)

    def test_manifest_missing_frame_fails_at_load(self, tmp_path):
        manifest_path = tmp_path / "seq.json"
        manifest_path.write_text(json.dumps({"sequence_id": "x", "frames": ["gone.png"]}))
        with pytest.raises(SequenceLoadError, match="gone.png"):
            load_manifest(manifest_path)

    def test_manifest_incomplete_annotation(self, tmp_path):
        write_gray(tmp_path / "f1.png", np.zeros((4, 4)))
        manifest_path = tmp_path / "seq.json"
        manifest_path.write_text(
            json.dumps({"sequence_id": "x", "frames": ["f1.png"], "apex": 3})
        )
        with pytest.raises(SequenceLoadError, match="incomplete annotation"):
            load_manifest(manifest_path)

    def test_empty_manifest_rejected(self):
        with pytest.raises(SequenceLoadError, match="no frames"):
            SequenceManifest(sequence_id="empty", frame_paths=[])

    def test_corpus_parsing(self, tmp_path):
        write_gray(tmp_path / "f1.png", np.zeros((4, 4)))
        corpus_path = tmp_path / "corpus.json"
        corpus_path.write_text(
            json.dumps(
                [
                    {"sequence_id": "a", "frames": ["f1.png"], "onset": 1, "apex": 1, "offset": 1},
                    {"sequence_id": "b", "frames": ["f1.png"]},
                ]
            )
        )
        manifests = load_corpus(corpus_path)
        assert [m.sequence_id for m in manifests] == ["a", "b"]
        assert manifests[0].ground_truth is not None
        assert manifests[1].ground_truth is None

    def test_corpus_must_be_array(self, tmp_path):
        corpus_path = tmp_path / "corpus.json"
        corpus_path.write_text(json.dumps({"frames": []}))
        with pytest.raises(SequenceLoadError, match="array"):
            load_corpus(corpus_path)

    def test_directory_manifest_lexicographic(self, tmp_path):
        names = ["c.png", "a.png", "b.png"]
        for name in names:
            write_gray(tmp_path / name, np.zeros((4, 4)))
        manifest = manifest_from_directory(tmp_path)
        assert [p.name for p in manifest.frame_paths] == ["a.png", "b.png", "c.png"]
        assert manifest.sequence_id == tmp_path.name

    def test_directory_without_frames(self, tmp_path):
        with pytest.raises(SequenceLoadError, match="no .png/.pgm frames"):
            manifest_from_directory(tmp_path)
