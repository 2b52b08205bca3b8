"""Spatiotemporal LBP descriptors on nine sampling planes with apex spotting.

The pipeline: load an image sequence into a GrayVolume, extract per-frame
descriptors (LBP histograms over a chosen plane set), build the
feature-difference curve against the neutral first frame, and pick the
apex.  A synthetic-sequence generator and an evaluation harness round out
the toolkit.
"""

from .benchmark import BenchResult, run_benchmark
from .descriptors import (
    DescriptorKind,
    FrameDescriptor,
    LbpHistogram,
    descriptors_identical,
    extract_descriptors,
    frame_histograms,
    kind_label,
    lbp_code,
    normalize,
    planes_for,
)
from .evaluation import (
    QUOTED_BASELINES,
    EvalReport,
    SampleOutcome,
    build_report,
    comparison_verdict,
    exact_hit_rate,
    mae,
    render_table,
    report_to_dict,
    se,
)
from .geometry import (
    ALL_PLANES,
    SIPL_PLANES,
    TOP_PLANES,
    PatternConfig,
    PlaneId,
    SampleOffset,
    SamplingPattern,
    Tap,
    build_pattern,
    interpolation_taps,
    plane_offsets,
)
from .reference import reference_extract
from .spotting import (
    FLATNESS_EPS,
    FdCurve,
    SpotResult,
    fd_curve,
    per_plane_spots,
    spot_apex,
)
from .synthesis import SynthSpec, envelope_values, generate_sequence, write_pgm_sequence
from .volume import (
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

__version__ = "0.1.0"

__all__ = [
    "ALL_PLANES",
    "Annotation",
    "BenchResult",
    "DescriptorKind",
    "EvalReport",
    "FLATNESS_EPS",
    "FdCurve",
    "FrameDescriptor",
    "GrayVolume",
    "LbpHistogram",
    "PatternConfig",
    "PlaneId",
    "QUOTED_BASELINES",
    "SIPL_PLANES",
    "SampleOffset",
    "SampleOutcome",
    "SamplingPattern",
    "SequenceLoadError",
    "SequenceManifest",
    "SpotResult",
    "SynthSpec",
    "TOP_PLANES",
    "Tap",
    "build_pattern",
    "build_report",
    "comparison_verdict",
    "descriptors_identical",
    "envelope_values",
    "exact_hit_rate",
    "extract_descriptors",
    "fd_curve",
    "frame_histograms",
    "generate_sequence",
    "interpolation_taps",
    "kind_label",
    "lbp_code",
    "load_corpus",
    "load_manifest",
    "load_sequence",
    "mae",
    "manifest_from_directory",
    "normalize",
    "per_plane_spots",
    "plane_offsets",
    "planes_for",
    "reference_extract",
    "render_table",
    "report_to_dict",
    "run_benchmark",
    "se",
    "spot_apex",
    "validate_annotation",
    "write_pgm_sequence",
]
