"""Sampling geometry for the nine supported LBP planes.

A video volume is treated as a 3-D grid (x, y, z) where x runs along image
width, y along image height and z along time.  Each plane parameterizes a
closed curve of N_P sample points around a central voxel:

* ``TOP_XY``, ``TOP_XZ``, ``TOP_YZ`` are the three orthogonal planes of the
  classic LBP-TOP descriptor.
* ``SIP1`` .. ``SIP6`` are the six temporal intersection planes of the
  LBP-SIPl descriptor: the two temporal orthogonal planes (``SIP1`` == XZ,
  ``SIP2`` == YZ) plus four diagonal planes lying in x=z, x=-z, y=z and
  y=-z.

Sample points generally fall off the voxel lattice, so every offset carries
a list of interpolation taps: lattice displacements with trilinear weights
(products of per-axis fractional complements).  Patterns are computed once
per (plane, config) and cached; per-voxel work never re-runs trigonometry.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

#: Admissible neighbour counts for all planes.
ALLOWED_POINT_COUNTS = (4, 8, 16, 24)

#: A sample-point component this close to an integer is treated as integral,
#: collapsing the interpolation taps along that axis.
INTEGER_SNAP_EPS = 1e-9


class PlaneId(enum.Enum):
    """The nine supported sampling planes."""

    SIP1 = "SIP1"
    SIP2 = "SIP2"
    SIP3 = "SIP3"
    SIP4 = "SIP4"
    SIP5 = "SIP5"
    SIP6 = "SIP6"
    TOP_XY = "TOP_XY"
    TOP_XZ = "TOP_XZ"
    TOP_YZ = "TOP_YZ"

    def __str__(self) -> str:
        return self.value


#: Plane set and concatenation order of the six-intersection-plane descriptor.
SIPL_PLANES = (
    PlaneId.SIP1,
    PlaneId.SIP2,
    PlaneId.SIP3,
    PlaneId.SIP4,
    PlaneId.SIP5,
    PlaneId.SIP6,
)

#: Plane set and concatenation order of the three-orthogonal-plane descriptor.
TOP_PLANES = (PlaneId.TOP_XY, PlaneId.TOP_XZ, PlaneId.TOP_YZ)

ALL_PLANES = SIPL_PLANES + TOP_PLANES


@dataclass(frozen=True)
class PatternConfig:
    """Neighbourhood shape shared by all planes: point count and per-axis radii."""

    n_points: int = 8
    radii: tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self) -> None:
        if self.n_points not in ALLOWED_POINT_COUNTS:
            raise ValueError(
                f"n_points must be one of {ALLOWED_POINT_COUNTS}, got {self.n_points}"
            )
        if len(self.radii) != 3:
            raise ValueError(f"radii must be (r_x, r_y, r_z), got {self.radii!r}")
        for r in self.radii:
            if not isinstance(r, int) or r < 1:
                raise ValueError(f"radii must be integers >= 1, got {self.radii!r}")

    @property
    def n_bins(self) -> int:
        return 1 << self.n_points


class SampleOffset(NamedTuple):
    """Real-valued displacement of one sample point from the central voxel."""

    dx: float
    dy: float
    dz: float


class Tap(NamedTuple):
    """One lattice read contributing to an interpolated sample."""

    dx: int
    dy: int
    dz: int
    weight: float


@dataclass(frozen=True)
class SamplingPattern:
    """Precomputed circle of sample offsets with their interpolation taps."""

    plane: PlaneId
    config: PatternConfig
    offsets: tuple[SampleOffset, ...]
    taps: tuple[tuple[Tap, ...], ...]


def _offset_at(plane: PlaneId, theta: float, radii: tuple[int, int, int]) -> SampleOffset:
    """Sample-point displacement for one angle on one plane.

    The sign conventions are normative: x advances with +cos, y with -sin,
    and the temporal component alternates between sin and cos (and its sign)
    from plane to plane.  The diagonal planes implement the printed
    parameterizations verbatim rather than re-derived in-plane circles.
    """
    rx, ry, rz = radii
    c = math.cos(theta)
    s = math.sin(theta)
    if plane is PlaneId.SIP1 or plane is PlaneId.TOP_XZ:
        return SampleOffset(rx * c, 0.0, rz * s)
    if plane is PlaneId.SIP2 or plane is PlaneId.TOP_YZ:
        return SampleOffset(0.0, -ry * s, rz * c)
    if plane is PlaneId.SIP3:
        return SampleOffset(rx * c, -ry * s, rz * c)
    if plane is PlaneId.SIP4:
        return SampleOffset(rx * c, -ry * s, -rz * c)
    if plane is PlaneId.SIP5:
        return SampleOffset(-rx * c, -ry * s, -rz * s)
    if plane is PlaneId.SIP6:
        return SampleOffset(rx * c, -ry * s, rz * s)
    if plane is PlaneId.TOP_XY:
        return SampleOffset(rx * c, -ry * s, 0.0)
    raise ValueError(f"unknown plane {plane!r}")


def plane_offsets(plane: PlaneId, config: PatternConfig) -> tuple[SampleOffset, ...]:
    """The ordered circle of sample offsets for one plane.

    Point ``n_p`` sits at angle ``2*pi*n_p / n_points``; the angle is strictly
    increasing in ``n_p``.  Every component is bounded in magnitude by the
    radius of its own axis.
    """
    n = config.n_points
    return tuple(
        _offset_at(plane, 2.0 * math.pi * n_p / n, config.radii) for n_p in range(n)
    )


def _axis_corners(component: float) -> list[tuple[int, float]]:
    """Lattice corners and weights along one axis.

    An integral component (within INTEGER_SNAP_EPS) yields the single exact
    lattice coordinate; otherwise the floor/ceil pair weighted by the
    fractional complement and fraction.
    """
    nearest = round(component)
    if abs(component - nearest) <= INTEGER_SNAP_EPS:
        return [(int(nearest), 1.0)]
    lo = math.floor(component)
    frac = component - lo
    return [(int(lo), 1.0 - frac), (int(lo) + 1, frac)]


def interpolation_taps(offset: SampleOffset) -> tuple[Tap, ...]:
    """Trilinear taps reading a (possibly) off-lattice sample point.

    Weights are products of per-axis factors, so they are non-negative and
    sum to 1 up to rounding; a fully integral offset collapses to a single
    weight-1 tap.  Corner enumeration is x-major, then y, then z.
    """
    xs = _axis_corners(offset.dx)
    ys = _axis_corners(offset.dy)
    zs = _axis_corners(offset.dz)
    return tuple(
        Tap(cx, cy, cz, wx * wy * wz)
        for (cx, wx), (cy, wy), (cz, wz) in itertools.product(xs, ys, zs)
    )


@lru_cache(maxsize=None)
def build_pattern(plane: PlaneId, config: PatternConfig) -> SamplingPattern:
    """Offsets plus taps for one (plane, config), cached for reuse."""
    offsets = plane_offsets(plane, config)
    taps = tuple(interpolation_taps(off) for off in offsets)
    return SamplingPattern(plane=plane, config=config, offsets=offsets, taps=taps)


def geometry_dump(config: PatternConfig, include_taps: bool = False) -> dict:
    """JSON-ready description of all nine planes' sampling geometry."""
    planes = {}
    for plane in ALL_PLANES:
        pattern = build_pattern(plane, config)
        entry: dict = {
            "offsets": [[off.dx, off.dy, off.dz] for off in pattern.offsets],
        }
        if include_taps:
            entry["taps"] = [
                [[tap.dx, tap.dy, tap.dz, tap.weight] for tap in taps]
                for taps in pattern.taps
            ]
        planes[plane.value] = entry
    return {
        "n_points": config.n_points,
        "radii": list(config.radii),
        "planes": planes,
    }
