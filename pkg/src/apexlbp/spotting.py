"""Feature-difference curves against the neutral first frame, and apex picking.

The feature difference FD(t) is the sum of squared differences between the
normalized descriptor of frame t and that of frame 1 (the neutral face).
The apex is the earliest frame maximizing FD.  A curve whose maximum is
below FLATNESS_EPS is flagged flat (degenerate sequence, e.g. a constant
volume); the apex then falls back to frame 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .descriptors import FrameDescriptor
from .geometry import PlaneId

FLATNESS_EPS = 1e-12


@dataclass(frozen=True)
class FdCurve:
    """Per-frame feature-difference values; index 0 holds frame 1."""

    values: np.ndarray
    kind: str
    scope: Optional[PlaneId] = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n_frames(self) -> int:
        return len(self.values)

    @property
    def scope_label(self) -> str:
        return "all" if self.scope is None else self.scope.value


@dataclass(frozen=True)
class SpotResult:
    """The selected apex frame and the curve it came from."""

    apex_frame: int
    peak_value: float
    flat: bool
    curve: FdCurve


def _segment_sq_distance(
    codes_a: np.ndarray, values_a: np.ndarray, codes_b: np.ndarray, values_b: np.ndarray
) -> float:
    """Sum of squared bin differences between two sparse segments.

    Bins present on both sides contribute (a - b)^2; bins present on one
    side contribute its frequency squared.  Identical segments give an
    exact 0.0.
    """
    common, idx_a, idx_b = np.intersect1d(
        codes_a, codes_b, assume_unique=True, return_indices=True
    )
    delta = values_a[idx_a] - values_b[idx_b]
    total = float(np.dot(delta, delta))
    if len(common) != len(codes_a):
        only_a = np.delete(values_a, idx_a)
        total += float(np.dot(only_a, only_a))
    if len(common) != len(codes_b):
        only_b = np.delete(values_b, idx_b)
        total += float(np.dot(only_b, only_b))
    return total


def _descriptor_distance(
    baseline: FrameDescriptor, other: FrameDescriptor, scope: Optional[PlaneId]
) -> float:
    planes = baseline.planes if scope is None else (scope,)
    total = 0.0
    for plane in planes:
        ca, va = baseline.segment(plane)
        cb, vb = other.segment(plane)
        total += _segment_sq_distance(ca, va, cb, vb)
    return total


def fd_curve(
    descriptors: Sequence[FrameDescriptor],
    kind: str,
    scope: Optional[PlaneId] = None,
) -> FdCurve:
    """FD of every frame against the first frame's descriptor.

    FD(1) is exactly 0 by construction.  With a plane scope, only that
    plane's segment enters the sum.
    """
    if len(descriptors) < 2:
        raise ValueError("need at least two frame descriptors to build an FD curve")
    first = descriptors[0]
    for d in descriptors[1:]:
        if d.planes != first.planes or d.n_points != first.n_points:
            raise ValueError(
                f"descriptor shape mismatch at frame {d.frame_index}: "
                f"expected planes {tuple(p.value for p in first.planes)} "
                f"with n_points={first.n_points}"
            )
    if scope is not None and scope not in first.planes:
        raise ValueError(f"scope plane {scope} not present in descriptors")
    values = np.array(
        [_descriptor_distance(first, d, scope) for d in descriptors], dtype=np.float64
    )
    return FdCurve(values=values, kind=kind, scope=scope)


def spot_apex(curve: FdCurve) -> SpotResult:
    """Earliest frame maximizing FD; flags flat curves."""
    if curve.n_frames == 0:
        raise ValueError("empty FD curve")
    idx = int(np.argmax(curve.values))
    peak = float(curve.values[idx])
    flat = peak < FLATNESS_EPS
    apex = 1 if flat else idx + 1
    return SpotResult(apex_frame=apex, peak_value=peak, flat=flat, curve=curve)


def per_plane_spots(
    descriptors: Sequence[FrameDescriptor], kind: str
) -> tuple[SpotResult, dict[PlaneId, SpotResult]]:
    """The all-planes spot plus one spot per individual plane."""
    overall = spot_apex(fd_curve(descriptors, kind=kind, scope=None))
    by_plane = {
        plane: spot_apex(fd_curve(descriptors, kind=kind, scope=plane))
        for plane in descriptors[0].planes
    }
    return overall, by_plane
