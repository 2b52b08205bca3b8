"""LBP code extraction and per-frame plane histograms.

The code of a voxel packs one sign bit per sample point: bit ``n_p`` is set
when the interpolated intensity difference between sample point ``n_p`` and
the centre is >= 0 (an exact tie counts as set).  The difference, not the
absolute sample, is interpolated: ``sum_i w_i * (v_i - centre)``.  The two
forms agree algebraically, but the difference form makes constant regions
yield an exact zero, so the all-ones code on flat input holds bit-for-bit.

Histograms are per frame and per plane: the descriptor of frame ``t``
accumulates the codes of every spatially interior pixel of frame ``t``,
with temporal samples read from frames ``t +- r_z`` (clamped at the
sequence ends, so every frame including the first has a descriptor).
Bins are kept sparsely as (sorted code, count) pairs: the label space is
``2**n_points`` wide, which is far too large to materialize densely at
n_points = 24, while a frame can populate at most one bin per interior
pixel.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .geometry import (
    SIPL_PLANES,
    TOP_PLANES,
    PatternConfig,
    PlaneId,
    SamplingPattern,
    build_pattern,
)
from .volume import GrayVolume

#: Largest bin space for which np.bincount beats np.unique.
_DENSE_COUNT_LIMIT = 1 << 16


class DescriptorKind(enum.Enum):
    """Multi-plane descriptor families."""

    LBP_SIPL = "lbp-sipl"
    LBP_TOP = "lbp-top"

    def __str__(self) -> str:
        return self.value


#: A descriptor request: a family, or a single plane.
KindLike = Union[DescriptorKind, PlaneId]


def planes_for(kind: KindLike) -> tuple[PlaneId, ...]:
    """Plane set and concatenation order for a descriptor kind."""
    if isinstance(kind, PlaneId):
        return (kind,)
    if kind is DescriptorKind.LBP_SIPL:
        return SIPL_PLANES
    if kind is DescriptorKind.LBP_TOP:
        return TOP_PLANES
    raise ValueError(f"unknown descriptor kind {kind!r}")


def kind_label(kind: KindLike) -> str:
    """Stable textual name for reports and file output."""
    if isinstance(kind, PlaneId):
        return f"plane:{kind.value}"
    return kind.value


@dataclass(frozen=True)
class LbpHistogram:
    """Occupancy counts of LBP codes for one plane of one frame.

    ``codes`` are the occupied bin labels in increasing order; ``counts``
    are the matching positive occupancies.  The conceptual bin space is
    ``2**n_points`` labels wide.
    """

    plane: PlaneId
    n_points: int
    codes: np.ndarray
    counts: np.ndarray

    @property
    def n_bins(self) -> int:
        return 1 << self.n_points

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def dense(self) -> np.ndarray:
        """Materialize the full bin vector (int64).  Intended for small n_points."""
        out = np.zeros(self.n_bins, dtype=np.int64)
        out[self.codes] = self.counts
        return out


@dataclass(frozen=True)
class FrameDescriptor:
    """Concatenation of per-plane normalized histograms for one frame.

    Segments appear in the fixed plane order of the descriptor kind; each
    segment is stored sparsely as (codes, frequencies) and sums to 1.
    """

    frame_index: int
    n_points: int
    planes: tuple[PlaneId, ...]
    codes: tuple[np.ndarray, ...]
    values: tuple[np.ndarray, ...]

    @property
    def n_bins(self) -> int:
        return 1 << self.n_points

    @property
    def length(self) -> int:
        """Total conceptual length: planes x 2**n_points."""
        return len(self.planes) * self.n_bins

    def segment(self, plane: PlaneId) -> tuple[np.ndarray, np.ndarray]:
        """Sparse (codes, frequencies) of one plane's segment."""
        i = self.planes.index(plane)
        return self.codes[i], self.values[i]

    def dense_segment(self, plane: PlaneId) -> np.ndarray:
        codes, values = self.segment(plane)
        out = np.zeros(self.n_bins, dtype=np.float64)
        out[codes] = values
        return out

    def to_dense(self) -> np.ndarray:
        """The full concatenated descriptor vector.  Intended for small n_points."""
        return np.concatenate([self.dense_segment(p) for p in self.planes])


def descriptors_identical(a: FrameDescriptor, b: FrameDescriptor) -> bool:
    """Bit-exact equality of two descriptors (structure, codes and values)."""
    if a.frame_index != b.frame_index or a.n_points != b.n_points or a.planes != b.planes:
        return False
    for ca, cb in zip(a.codes, b.codes):
        if not np.array_equal(ca, cb):
            return False
    for va, vb in zip(a.values, b.values):
        if not np.array_equal(va, vb):
            return False
    return True


def _check_volume_fits(volume: GrayVolume, config: PatternConfig) -> None:
    rx, ry, _ = config.radii
    if volume.width < 2 * rx + 1 or volume.height < 2 * ry + 1:
        raise ValueError(
            f"volume {volume.width}x{volume.height} too small for radii "
            f"(r_x={rx}, r_y={ry}): need at least {2 * rx + 1}x{2 * ry + 1}"
        )


def lbp_code(
    volume: GrayVolume,
    center: tuple[int, int, int],
    pattern: SamplingPattern,
) -> int:
    """LBP code of the 1-based centre voxel (x, y, z) under one pattern.

    The centre must be spatially interior (at least the pattern radius away
    from the x/y borders); temporal taps clamp to the first/last frame.
    """
    x, y, z = center
    rx, ry, _ = pattern.config.radii
    if not (rx + 1 <= x <= volume.width - rx) or not (ry + 1 <= y <= volume.height - ry):
        raise ValueError(
            f"centre ({x}, {y}) violates the interior margin r_x={rx}, r_y={ry} "
            f"for a {volume.width}x{volume.height} frame"
        )
    if not 1 <= z <= volume.depth:
        raise ValueError(f"frame index {z} outside [1, {volume.depth}]")
    data = volume.data
    depth = volume.depth
    x0, y0, z0 = x - 1, y - 1, z - 1
    centre_value = data[z0, y0, x0]
    code = 0
    for bit, taps in enumerate(pattern.taps):
        diff = 0.0
        for tap in taps:
            tz = z0 + tap.dz
            tz = 0 if tz < 0 else (depth - 1 if tz >= depth else tz)
            diff += tap.weight * (data[tz, y0 + tap.dy, x0 + tap.dx] - centre_value)
        if diff >= 0.0:
            code |= 1 << bit
    return code


def _code_image(data: np.ndarray, t0: int, pattern: SamplingPattern) -> np.ndarray:
    """Codes of all interior pixels of 0-based frame t0, vectorized per tap."""
    depth, height, width = data.shape
    rx, ry, _ = pattern.config.radii
    centre = data[t0, ry : height - ry, rx : width - rx]
    codes = np.zeros(centre.shape, dtype=np.uint32)
    for bit, taps in enumerate(pattern.taps):
        diff = np.zeros_like(centre)
        for tap in taps:
            tz = t0 + tap.dz
            tz = 0 if tz < 0 else (depth - 1 if tz >= depth else tz)
            window = data[tz, ry + tap.dy : height - ry + tap.dy, rx + tap.dx : width - rx + tap.dx]
            diff += tap.weight * (window - centre)
        codes |= (diff >= 0.0).astype(np.uint32) << np.uint32(bit)
    return codes


def _sparse_counts(codes: np.ndarray, n_bins: int) -> tuple[np.ndarray, np.ndarray]:
    flat = codes.ravel()
    if n_bins <= _DENSE_COUNT_LIMIT:
        dense = np.bincount(flat, minlength=n_bins)
        occupied = np.flatnonzero(dense)
        return occupied.astype(np.uint32), dense[occupied].astype(np.int64)
    unique, counts = np.unique(flat, return_counts=True)
    return unique.astype(np.uint32), counts.astype(np.int64)


def frame_histograms(
    volume: GrayVolume,
    t: int,
    planes: Iterable[PlaneId],
    config: PatternConfig,
) -> list[LbpHistogram]:
    """Per-plane code histograms of the 1-based frame t.

    Every interior pixel contributes exactly one count per plane, so each
    histogram totals (W - 2 r_x)(H - 2 r_y) regardless of content.
    """
    _check_volume_fits(volume, config)
    if not 1 <= t <= volume.depth:
        raise ValueError(f"frame index {t} outside [1, {volume.depth}]")
    histograms = []
    for plane in planes:
        pattern = build_pattern(plane, config)
        codes = _code_image(volume.data, t - 1, pattern)
        occupied, counts = _sparse_counts(codes, config.n_bins)
        histograms.append(
            LbpHistogram(plane=plane, n_points=config.n_points, codes=occupied, counts=counts)
        )
    return histograms


def normalize(histograms: list[LbpHistogram], frame_index: int) -> FrameDescriptor:
    """Normalize each plane's histogram to frequencies and concatenate.

    Each plane is normalized by its own total, independently of the others.
    """
    if not histograms:
        raise ValueError("no histograms to normalize")
    n_points = histograms[0].n_points
    planes = []
    codes = []
    values = []
    for hist in histograms:
        if hist.n_points != n_points:
            raise ValueError("histograms mix different point counts")
        total = hist.total
        if total <= 0:
            raise ValueError(f"empty plane histogram for {hist.plane}")
        planes.append(hist.plane)
        codes.append(hist.codes)
        values.append(hist.counts / float(total))
    return FrameDescriptor(
        frame_index=frame_index,
        n_points=n_points,
        planes=tuple(planes),
        codes=tuple(codes),
        values=tuple(values),
    )


def _descriptor_for_frame(
    volume: GrayVolume, t: int, planes: tuple[PlaneId, ...], config: PatternConfig
) -> FrameDescriptor:
    return normalize(frame_histograms(volume, t, planes, config), frame_index=t)


def extract_descriptors(
    volume: GrayVolume,
    kind: KindLike,
    config: PatternConfig | None = None,
    threads: int = 1,
) -> list[FrameDescriptor]:
    """One FrameDescriptor per frame, t = 1 .. depth, in order.

    ``threads`` is a bounded-parallelism hint; frames are independent work
    items and results are deterministic regardless of thread count.
    """
    config = config or PatternConfig()
    _check_volume_fits(volume, config)
    planes = planes_for(kind)
    for plane in planes:
        build_pattern(plane, config)
    frames = range(1, volume.depth + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(
                pool.map(lambda t: _descriptor_for_frame(volume, t, planes, config), frames)
            )
    return [_descriptor_for_frame(volume, t, planes, config) for t in frames]
