"""Seeded synthetic sequences with an analytically planted apex frame.

A sequence is a static random texture plus an additive local intensity
bump whose strength follows a temporal envelope: zero at frame 1, maximal
at the planted apex, falling off afterwards.  Optional Gaussian noise is
applied after the deformation.  The construction is fully deterministic
for a given seed, which makes these sequences usable as an end-to-end
oracle for the spotting pipeline.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image

from .volume import Annotation, GrayVolume

ENVELOPE_SHAPES = ("triangular", "raised-cosine")

#: Amplitude at which the bump reaches its full spatial radius.
AMPLITUDE_REF = 64.0

#: Base texture upper bound, leaving headroom so deformations up to
#: AMPLITUDE_REF never clip at 255.
BASE_TEXTURE_MAX = 255.0 - AMPLITUDE_REF


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic sequence."""

    width: int
    height: int
    depth: int
    apex_frame: int
    amplitude: float = 32.0
    bump_center: Optional[tuple[float, float]] = None
    bump_radius: Optional[float] = None
    texture_seed: int = 0
    noise_sigma: float = 0.0
    envelope: str = "triangular"

    def __post_init__(self) -> None:
        if self.width < 3 or self.height < 3:
            raise ValueError(f"frame size {self.width}x{self.height} too small (need >= 3x3)")
        if self.depth < 3:
            raise ValueError(f"depth {self.depth} too small (need >= 3)")
        # The envelope must be 0 at frame 1 and maximal at the apex, so the
        # apex cannot be the first frame.
        if not 2 <= self.apex_frame <= self.depth:
            raise ValueError(
                f"apex_frame {self.apex_frame} outside [2, depth={self.depth}]"
            )
        if self.amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if self.envelope not in ENVELOPE_SHAPES:
            raise ValueError(f"envelope must be one of {ENVELOPE_SHAPES}")
        if self.resolved_radius() <= 0:
            raise ValueError("bump radius must be positive")

    def resolved_center(self) -> tuple[float, float]:
        if self.bump_center is not None:
            return self.bump_center
        return ((self.width + 1) / 2.0, (self.height + 1) / 2.0)

    def resolved_radius(self) -> float:
        if self.bump_radius is not None:
            return self.bump_radius
        return min(self.width, self.height) / 4.0


def envelope_values(spec: SynthSpec) -> np.ndarray:
    """Deformation strength per frame, in [0, 1]; index 0 holds frame 1."""
    k = spec.apex_frame
    t = np.arange(1, spec.depth + 1, dtype=np.float64)
    env = np.zeros(spec.depth, dtype=np.float64)
    rising = t <= k
    if spec.envelope == "triangular":
        env[rising] = (t[rising] - 1.0) / (k - 1.0)
        if k < spec.depth:
            env[~rising] = (spec.depth - t[~rising]) / (spec.depth - k)
        else:
            env[~rising] = 1.0
    else:
        env[rising] = 0.5 * (1.0 - np.cos(math.pi * (t[rising] - 1.0) / (k - 1.0)))
        if k < spec.depth:
            env[~rising] = 0.5 * (1.0 + np.cos(math.pi * (t[~rising] - k) / (spec.depth - k)))
        else:
            env[~rising] = 1.0
    return env


def _centre_distances(spec: SynthSpec) -> np.ndarray:
    cx, cy = spec.resolved_center()
    xs = np.arange(1, spec.width + 1, dtype=np.float64)
    ys = np.arange(1, spec.height + 1, dtype=np.float64)
    return np.hypot(xs[np.newaxis, :] - cx, ys[:, np.newaxis] - cy)


def _deformation(spec: SynthSpec, strength: float, dist: np.ndarray) -> np.ndarray:
    """Additive intensity bump at one envelope strength.

    Sign thresholding is insensitive to the size of a purely temporal
    intensity step, so a fixed-support bump would disturb the same pixel
    set in every active frame and the per-frame histogram distance would
    not peak at the apex.  The disturbed area is therefore the signal
    carrier: the bump's spatial support scales with the envelope (growing
    toward the apex, shrinking after) and with the amplitude (up to
    AMPLITUDE_REF, where it reaches the full configured radius).
    """
    if strength <= 0.0 or spec.amplitude <= 0.0:
        return np.zeros_like(dist)
    # sqrt keeps low-amplitude supports above the lattice pitch; a linear
    # reach would quantize the footprint into exact FD ties between frames.
    reach = math.sqrt(min(spec.amplitude, AMPLITUDE_REF) / AMPLITUDE_REF)
    support = strength * reach * spec.resolved_radius()
    scaled = np.minimum(dist / support, 1.0)
    return spec.amplitude * strength * (0.5 * (1.0 + np.cos(math.pi * scaled)))


def _annotation_from_envelope(spec: SynthSpec, env: np.ndarray) -> Annotation:
    active = np.flatnonzero(env > 0.0)
    return Annotation(
        onset_frame=int(active[0]) + 1,
        apex_frame=spec.apex_frame,
        offset_frame=int(active[-1]) + 1,
    )


def generate_sequence(spec: SynthSpec) -> tuple[GrayVolume, Annotation]:
    """Build the volume and its ground-truth annotation.

    The same spec always yields a bit-identical volume.  With amplitude 0
    every frame equals the base texture and the downstream FD curve is
    identically zero.
    """
    rng = np.random.default_rng(spec.texture_seed)
    base = rng.uniform(0.0, BASE_TEXTURE_MAX, size=(spec.height, spec.width))
    env = envelope_values(spec)
    dist = _centre_distances(spec)
    frames = np.empty((spec.depth, spec.height, spec.width), dtype=np.float64)
    for i in range(spec.depth):
        frame = base + _deformation(spec, float(env[i]), dist)
        if spec.noise_sigma > 0.0:
            frame = frame + rng.normal(0.0, spec.noise_sigma, size=base.shape)
        frames[i] = np.clip(frame, 0.0, 255.0)
    return GrayVolume(frames), _annotation_from_envelope(spec, env)


def write_pgm_sequence(
    volume: GrayVolume,
    annotation: Annotation,
    directory: str | Path,
    sequence_id: str,
) -> Path:
    """Write frames as PGM files plus a manifest JSON; returns the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    names = []
    quantized = np.clip(np.rint(volume.data), 0, 255).astype(np.uint8)
    for i in range(volume.depth):
        name = f"frame_{i + 1:04d}.pgm"
        Image.fromarray(quantized[i], mode="L").save(directory / name)
        names.append(name)
    manifest = {
        "sequence_id": sequence_id,
        "frames": names,
        "onset": annotation.onset_frame,
        "apex": annotation.apex_frame,
        "offset": annotation.offset_frame,
    }
    manifest_path = directory / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest_path
