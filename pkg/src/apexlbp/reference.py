"""Brute-force descriptor extraction, used as an equivalence oracle.

Everything here is deliberately literal: per-voxel trigonometry, scalar
interpolation, no pattern caching, no vectorization, no parallelism.  The
only shared vocabulary with the optimized path is the plane naming and the
output types.  Floating-point operations are sequenced identically to the
optimized extractor (same corner enumeration, same product grouping, same
accumulation order), so outputs must match bit for bit, which is exactly
what the oracle tests assert.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from .descriptors import FrameDescriptor, KindLike, planes_for
from .geometry import PatternConfig, PlaneId
from .volume import GrayVolume


def _corners(component: float) -> tuple[tuple[int, float], ...]:
    nearest = round(component)
    if abs(component - nearest) <= 1e-9:
        return ((int(nearest), 1.0),)
    lo = math.floor(component)
    frac = component - lo
    return ((int(lo), 1.0 - frac), (int(lo) + 1, frac))


def _offset(plane: PlaneId, theta: float, rx: int, ry: int, rz: int) -> tuple[float, float, float]:
    c = math.cos(theta)
    s = math.sin(theta)
    if plane is PlaneId.SIP1 or plane is PlaneId.TOP_XZ:
        return rx * c, 0.0, rz * s
    if plane is PlaneId.SIP2 or plane is PlaneId.TOP_YZ:
        return 0.0, -ry * s, rz * c
    if plane is PlaneId.SIP3:
        return rx * c, -ry * s, rz * c
    if plane is PlaneId.SIP4:
        return rx * c, -ry * s, -rz * c
    if plane is PlaneId.SIP5:
        return -rx * c, -ry * s, -rz * s
    if plane is PlaneId.SIP6:
        return rx * c, -ry * s, rz * s
    if plane is PlaneId.TOP_XY:
        return rx * c, -ry * s, 0.0
    raise ValueError(f"unknown plane {plane!r}")


def reference_extract(
    volume: GrayVolume,
    kind: KindLike,
    config: PatternConfig | None = None,
) -> list[FrameDescriptor]:
    """One FrameDescriptor per frame, computed the slow, obvious way."""
    config = config or PatternConfig()
    rx, ry, rz = config.radii
    width, height, depth = volume.width, volume.height, volume.depth
    if width < 2 * rx + 1 or height < 2 * ry + 1:
        raise ValueError(
            f"volume {width}x{height} too small for radii (r_x={rx}, r_y={ry})"
        )
    n_points = config.n_points
    planes = planes_for(kind)
    # Plain nested lists keep the scalar loops honest Python floats.
    grid = volume.data.tolist()

    descriptors = []
    for t in range(1, depth + 1):
        planes_out = []
        codes_out = []
        values_out = []
        for plane in planes:
            tally: Counter[int] = Counter()
            for y in range(ry + 1, height - ry + 1):
                row = grid[t - 1][y - 1]
                for x in range(rx + 1, width - rx + 1):
                    centre = row[x - 1]
                    code = 0
                    for n_p in range(n_points):
                        theta = 2.0 * math.pi * n_p / n_points
                        dx, dy, dz = _offset(plane, theta, rx, ry, rz)
                        diff = 0.0
                        for cx, wx in _corners(dx):
                            for cy, wy in _corners(dy):
                                for cz, wz in _corners(dz):
                                    tz = (t - 1) + cz
                                    tz = 0 if tz < 0 else (depth - 1 if tz >= depth else tz)
                                    v = grid[tz][y - 1 + cy][x - 1 + cx]
                                    diff += (wx * wy * wz) * (v - centre)
                        if diff >= 0.0:
                            code += 1 << n_p
                    tally[code] += 1
            occupied = sorted(tally)
            counts = np.array([tally[c] for c in occupied], dtype=np.int64)
            total = int(counts.sum())
            planes_out.append(plane)
            codes_out.append(np.array(occupied, dtype=np.uint32))
            values_out.append(counts / float(total))
        descriptors.append(
            FrameDescriptor(
                frame_index=t,
                n_points=n_points,
                planes=tuple(planes_out),
                codes=tuple(codes_out),
                values=tuple(values_out),
            )
        )
    return descriptors
