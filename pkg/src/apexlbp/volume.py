"""Loading image sequences into an immutable gray-level volume.

Sequences arrive either as a JSON manifest (explicit frame order) or as a
directory of frames (lexicographic file-name order).  Frames must be 8-bit
gray or 8-bit RGB PGM/PNG images of identical size.  RGB is reduced to luma
as 0.299 R + 0.587 G + 0.114 B, kept real-valued so that interpolated
samples are not quantized twice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image, UnidentifiedImageError

LUMA_WEIGHTS = (0.299, 0.587, 0.114)

_ACCEPTED_SUFFIXES = (".png", ".pgm")
_ACCEPTED_MODES = ("L", "RGB")


class SequenceLoadError(Exception):
    """A sequence could not be assembled into a volume."""


@dataclass(frozen=True)
class Annotation:
    """Ground-truth onset/apex/offset frame indices, 1-based."""

    onset_frame: int
    apex_frame: int
    offset_frame: int


@dataclass
class SequenceManifest:
    """An ordered list of frame files with optional ground truth."""

    sequence_id: str
    frame_paths: list[Path]
    ground_truth: Optional[Annotation] = None

    def __post_init__(self) -> None:
        if not self.frame_paths:
            raise SequenceLoadError(f"manifest {self.sequence_id!r} lists no frames")


@dataclass(frozen=True)
class GrayVolume:
    """A W x H x T gray-level volume, stored as (depth, height, width) float64.

    Intensities live in [0, 255].  The array is frozen after construction and
    safe to share read-only.  Frame/voxel coordinates in the public API are
    1-based; ``value`` translates.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3:
            raise ValueError(f"volume data must be 3-D (depth, height, width), got shape {arr.shape}")
        if arr.size == 0:
            raise ValueError("volume data is empty")
        if not np.isfinite(arr).all():
            raise ValueError("volume data contains non-finite values")
        lo, hi = float(arr.min()), float(arr.max())
        if lo < 0.0 or hi > 255.0:
            raise ValueError(f"intensities must lie in [0, 255], found range [{lo}, {hi}]")
        arr = arr.copy() if arr is self.data else arr
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def depth(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    def value(self, x: int, y: int, z: int) -> float:
        """Voxel intensity at 1-based (x, y, z)."""
        return float(self.data[z - 1, y - 1, x - 1])

    def frame(self, t: int) -> np.ndarray:
        """The 1-based frame t as a read-only (height, width) array."""
        return self.data[t - 1]


def _decode_frame(path: Path) -> np.ndarray:
    """One frame as a float64 (height, width) luma array."""
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode not in _ACCEPTED_MODES:
                raise SequenceLoadError(
                    f"unsupported image mode {mode!r} in {path} (need 8-bit gray or RGB)"
                )
            arr = np.asarray(im, dtype=np.float64)
    except FileNotFoundError:
        raise SequenceLoadError(f"missing frame file {path}") from None
    except UnidentifiedImageError:
        raise SequenceLoadError(f"cannot decode image file {path}") from None
    if arr.ndim == 2:
        return arr
    r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
    wr, wg, wb = LUMA_WEIGHTS
    return wr * r + wg * g + wb * b


def load_sequence(manifest: SequenceManifest) -> GrayVolume:
    """Decode every manifest frame into one volume.

    Raises SequenceLoadError naming the offending file on a missing or
    corrupt frame, and naming the first mismatching frame if dimensions
    differ.
    """
    frames = []
    shape: tuple[int, int] | None = None
    for path in manifest.frame_paths:
        frame = _decode_frame(Path(path))
        if shape is None:
            shape = frame.shape
        elif frame.shape != shape:
            raise SequenceLoadError(
                f"frame dimension mismatch in {path}: got {frame.shape[1]}x{frame.shape[0]}, "
                f"expected {shape[1]}x{shape[0]}"
            )
        frames.append(frame)
    return GrayVolume(np.stack(frames, axis=0))


def validate_annotation(annotation: Annotation, volume: GrayVolume) -> list[str]:
    """Check onset <= apex <= offset against the volume depth.

    Returns a list of violation descriptions; an empty list means the
    annotation is consistent.  Never raises.
    """
    problems = []
    if annotation.onset_frame < 1:
        problems.append("onset before first frame")
    if annotation.apex_frame < annotation.onset_frame:
        problems.append("apex before onset")
    if annotation.offset_frame < annotation.apex_frame:
        problems.append("offset before apex")
    if annotation.offset_frame > volume.depth:
        problems.append("offset exceeds depth")
    return problems


def _check_exists(path: Path, context: str) -> None:
    if not path.is_file():
        raise SequenceLoadError(f"{context}: missing frame file {path}")


def _annotation_from_fields(obj: dict, context: str) -> Optional[Annotation]:
    keys = ("onset", "apex", "offset")
    present = [k for k in keys if k in obj]
    if not present:
        return None
    if len(present) != len(keys):
        missing = sorted(set(keys) - set(present))
        raise SequenceLoadError(f"{context}: incomplete annotation, missing {missing}")
    return Annotation(
        onset_frame=int(obj["onset"]),
        apex_frame=int(obj["apex"]),
        offset_frame=int(obj["offset"]),
    )


def _manifest_from_obj(obj: dict, base_dir: Path, context: str) -> SequenceManifest:
    if "frames" not in obj or not isinstance(obj["frames"], list):
        raise SequenceLoadError(f"{context}: manifest needs a 'frames' array")
    sequence_id = str(obj.get("sequence_id", context))
    paths = []
    for entry in obj["frames"]:
        path = Path(entry)
        if not path.is_absolute():
            path = base_dir / path
        _check_exists(path, context)
        paths.append(path)
    return SequenceManifest(
        sequence_id=sequence_id,
        frame_paths=paths,
        ground_truth=_annotation_from_fields(obj, context),
    )


def load_manifest(path: str | Path) -> SequenceManifest:
    """Parse a manifest JSON file; relative frame paths resolve against it."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except FileNotFoundError:
        raise SequenceLoadError(f"missing manifest file {path}") from None
    except json.JSONDecodeError as exc:
        raise SequenceLoadError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(obj, dict):
        raise SequenceLoadError(f"{path}: manifest must be a JSON object")
    return _manifest_from_obj(obj, path.parent, str(path))


def load_corpus(path: str | Path) -> list[SequenceManifest]:
    """Parse a corpus file: a JSON array of manifest objects."""
    path = Path(path)
    try:
        arr = json.loads(path.read_text())
    except FileNotFoundError:
        raise SequenceLoadError(f"missing corpus file {path}") from None
    except json.JSONDecodeError as exc:
        raise SequenceLoadError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(arr, list) or not arr:
        raise SequenceLoadError(f"{path}: corpus must be a non-empty JSON array of manifests")
    manifests = []
    for i, obj in enumerate(arr):
        if not isinstance(obj, dict):
            raise SequenceLoadError(f"{path}: corpus entry {i} is not a manifest object")
        context = str(obj.get("sequence_id", f"{path}[{i}]"))
        manifests.append(_manifest_from_obj(obj, path.parent, context))
    return manifests


def manifest_from_directory(
    directory: str | Path, sequence_id: Optional[str] = None
) -> SequenceManifest:
    """Build a manifest from a frame directory, ordered by file name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise SequenceLoadError(f"not a directory: {directory}")
    paths = sorted(
        (p for p in directory.iterdir() if p.suffix.lower() in _ACCEPTED_SUFFIXES),
        key=lambda p: p.name,
    )
    if not paths:
        raise SequenceLoadError(f"no .png/.pgm frames found in {directory}")
    return SequenceManifest(
        sequence_id=sequence_id or directory.name,
        frame_paths=paths,
    )
