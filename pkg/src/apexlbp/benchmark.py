"""Extraction throughput measurement on seeded random volumes."""

from __future__ import annotations

import statistics
import time
from dataclasses import asdict, dataclass

import numpy as np

from .descriptors import KindLike, extract_descriptors, kind_label
from .geometry import PatternConfig
from .volume import GrayVolume


@dataclass(frozen=True)
class BenchResult:
    width: int
    height: int
    depth: int
    kind: str
    n_points: int
    radii: tuple[int, int, int]
    repetitions: int
    per_sequence_seconds: float
    per_frame_seconds: float
    frames_per_second: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["radii"] = list(self.radii)
        return out


def run_benchmark(
    width: int,
    height: int,
    depth: int,
    kind: KindLike,
    config: PatternConfig | None = None,
    repetitions: int = 3,
    seed: int = 0,
    threads: int = 1,
) -> BenchResult:
    """Median wall time of full-sequence extraction over sequential repetitions.

    The per-frame figure is the per-sequence median divided by the frame
    count; frames are not timed individually.
    """
    if repetitions < 3:
        raise ValueError("need at least 3 repetitions for a stable median")
    config = config or PatternConfig()
    rng = np.random.default_rng(seed)
    volume = GrayVolume(rng.uniform(0.0, 255.0, size=(depth, height, width)))
    times = []
    for _ in range(repetitions):
        started = time.perf_counter()
        extract_descriptors(volume, kind, config, threads=threads)
        times.append(time.perf_counter() - started)
    per_sequence = statistics.median(times)
    return BenchResult(
        width=width,
        height=height,
        depth=depth,
        kind=kind_label(kind),
        n_points=config.n_points,
        radii=config.radii,
        repetitions=repetitions,
        per_sequence_seconds=per_sequence,
        per_frame_seconds=per_sequence / depth,
        frames_per_second=depth / per_sequence,
    )
