"""Command-line entry point.

Subcommands: dump-geometry, extract, spot, eval, synth, bench.  All frame
indices in inputs and outputs are 1-based.  Outputs are deterministic for
fixed inputs and seeds; usage errors exit 2, runtime failures print one
diagnostic line to stderr and exit 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional

from .benchmark import run_benchmark
from .descriptors import (
    DescriptorKind,
    KindLike,
    extract_descriptors,
    kind_label,
)
from .evaluation import (
    METHOD_LABELS,
    SampleOutcome,
    build_report,
    render_table,
    report_to_dict,
)
from .geometry import PatternConfig, PlaneId, geometry_dump
from .spotting import SpotResult, fd_curve, per_plane_spots, spot_apex
from .synthesis import SynthSpec, generate_sequence, write_pgm_sequence
from .volume import (
    GrayVolume,
    SequenceManifest,
    load_corpus,
    load_manifest,
    load_sequence,
    manifest_from_directory,
)


def _parse_kind(text: str) -> KindLike:
    if text == "lbp-sipl":
        return DescriptorKind.LBP_SIPL
    if text == "lbp-top":
        return DescriptorKind.LBP_TOP
    if text.startswith("plane:"):
        name = text.split(":", 1)[1].upper()
        try:
            return PlaneId(name)
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"unknown plane {name!r}; expected one of "
                f"{', '.join(p.value for p in PlaneId)}"
            ) from None
    raise argparse.ArgumentTypeError(
        f"invalid kind {text!r}; expected lbp-sipl, lbp-top or plane:<id>"
    )


def _parse_radii(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"radii must be rx,ry,rz, got {text!r}")
    try:
        rx, ry, rz = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"radii must be integers, got {text!r}") from None
    if min(rx, ry, rz) < 1:
        raise argparse.ArgumentTypeError("radii must be >= 1")
    return rx, ry, rz


def _parse_size(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"size must be WxHxD, got {text!r}")
    try:
        w, h, d = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"size must be integers WxHxD, got {text!r}") from None
    if min(w, h, d) < 1:
        raise argparse.ArgumentTypeError("size components must be >= 1")
    return w, h, d


def _add_pattern_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--np", dest="n_points", type=int, choices=(4, 8, 16, 24), default=8,
        help="number of sample points per plane (default 8)",
    )
    parser.add_argument(
        "--radii", type=_parse_radii, default=(1, 1, 1), metavar="RX,RY,RZ",
        help="sampling radii along x, y, z (default 1,1,1)",
    )


def _add_kind_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--kind", type=_parse_kind, default=DescriptorKind.LBP_SIPL,
        metavar="{lbp-sipl|lbp-top|plane:<id>}",
        help="descriptor kind (default lbp-sipl)",
    )


def _add_threads_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threads", type=int, default=1,
        help="bounded-parallelism hint for extraction (default 1)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apexlbp",
        description=(
            "Spatiotemporal LBP descriptors on nine sampling planes, with "
            "automatic apex frame spotting and evaluation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_geo = sub.add_parser("dump-geometry", help="emit the nine planes' sample offsets as JSON")
    _add_pattern_args(p_geo)
    p_geo.add_argument("--taps", action="store_true", help="include interpolation taps")
    p_geo.add_argument("--out", type=Path, default=None, help="output directory (default: stdout)")

    p_ext = sub.add_parser("extract", help="write per-frame descriptors as CSV")
    p_ext.add_argument("--input", required=True, help="frame directory or manifest JSON")
    _add_kind_arg(p_ext)
    _add_pattern_args(p_ext)
    _add_threads_arg(p_ext)
    p_ext.add_argument("--out", type=Path, default=None, help="output directory (default: stdout)")

    p_spot = sub.add_parser("spot", help="spot the apex frame of one sequence")
    p_spot.add_argument("--input", required=True, help="frame directory or manifest JSON")
    _add_kind_arg(p_spot)
    _add_pattern_args(p_spot)
    _add_threads_arg(p_spot)
    p_spot.add_argument("--per-plane", action="store_true", help="also spot each plane separately")
    p_spot.add_argument("--out", type=Path, default=None, help="output directory (default: stdout)")

    p_eval = sub.add_parser("eval", help="score spotting over an annotated corpus")
    p_eval.add_argument("--corpus", required=True, help="corpus JSON (array of manifests)")
    _add_kind_arg(p_eval)
    _add_pattern_args(p_eval)
    _add_threads_arg(p_eval)
    p_eval.add_argument("--per-plane", action="store_true", help="add a per-plane breakdown")
    p_eval.add_argument("--out", type=Path, default=None, help="output directory (default: stdout)")

    p_synth = sub.add_parser("synth", help="generate a synthetic sequence with a known apex")
    p_synth.add_argument("--out", type=Path, required=True, help="output directory for frames")
    p_synth.add_argument("--size", type=_parse_size, default=(64, 64, 24), metavar="WxHxD")
    p_synth.add_argument("--apex", type=int, default=12, help="planted apex frame (1-based)")
    p_synth.add_argument("--amplitude", type=float, default=32.0, help="deformation amplitude")
    p_synth.add_argument("--bump-radius", type=float, default=None, help="bump radius in pixels")
    p_synth.add_argument("--noise", type=float, default=0.0, help="Gaussian noise sigma")
    p_synth.add_argument(
        "--envelope", choices=("triangular", "raised-cosine"), default="triangular"
    )
    p_synth.add_argument("--seed", type=int, default=0, help="texture seed")
    p_synth.add_argument("--sequence-id", default="synthetic", help="manifest sequence id")

    p_bench = sub.add_parser("bench", help="measure extraction throughput")
    p_bench.add_argument("--size", type=_parse_size, default=(640, 480, 60), metavar="WxHxD")
    _add_kind_arg(p_bench)
    _add_pattern_args(p_bench)
    _add_threads_arg(p_bench)
    p_bench.add_argument("--reps", type=int, default=3, help="repetitions (median reported)")
    p_bench.add_argument("--seed", type=int, default=0, help="volume seed")
    p_bench.add_argument("--out", type=Path, default=None, help="output directory (default: stdout)")

    return parser


def _load_input_sequence(path_text: str) -> tuple[SequenceManifest, GrayVolume]:
    path = Path(path_text)
    if path.is_dir():
        manifest = manifest_from_directory(path)
    else:
        manifest = load_manifest(path)
    return manifest, load_sequence(manifest)


def _write_json(obj: dict, out_dir: Optional[Path], filename: str) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out_dir is None:
        sys.stdout.write(text)
    else:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / filename).write_text(text)


def _cmd_dump_geometry(args: argparse.Namespace) -> int:
    config = PatternConfig(n_points=args.n_points, radii=args.radii)
    _write_json(geometry_dump(config, include_taps=args.taps), args.out, "geometry.json")
    return 0


def _cmd_extract(args: argparse.Namespace) -> int:
    config = PatternConfig(n_points=args.n_points, radii=args.radii)
    manifest, volume = _load_input_sequence(args.input)
    descriptors = extract_descriptors(volume, args.kind, config, threads=args.threads)

    def write_rows(stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["frame", "plane", "bin", "value"])
        for desc in descriptors:
            for plane in desc.planes:
                codes, values = desc.segment(plane)
                for code, value in zip(codes.tolist(), values.tolist()):
                    writer.writerow([desc.frame_index, plane.value, code, repr(value)])

    if args.out is None:
        write_rows(sys.stdout)
    else:
        args.out.mkdir(parents=True, exist_ok=True)
        with open(args.out / "descriptors.csv", "w", newline="") as fh:
            write_rows(fh)
    return 0


def _spot_payload(result: SpotResult) -> dict:
    return {
        "apex_frame": result.apex_frame,
        "peak_value": result.peak_value,
        "flat": result.flat,
    }


def _cmd_spot(args: argparse.Namespace) -> int:
    config = PatternConfig(n_points=args.n_points, radii=args.radii)
    manifest, volume = _load_input_sequence(args.input)
    descriptors = extract_descriptors(volume, args.kind, config, threads=args.threads)
    label = kind_label(args.kind)

    curves = {}
    if args.per_plane:
        overall, by_plane = per_plane_spots(descriptors, kind=label)
        plane_results = {plane.value: spot for plane, spot in by_plane.items()}
    else:
        overall = spot_apex(fd_curve(descriptors, kind=label))
        plane_results = {}
    curves["all"] = overall.curve
    for name, spot in plane_results.items():
        curves[name] = spot.curve

    if overall.flat:
        sys.stderr.write(
            "warning: FD curve is flat (no descriptor change); apex defaulted to frame 1\n"
        )

    payload = {
        "sequence_id": manifest.sequence_id,
        "kind": label,
        "n_points": args.n_points,
        "radii": list(args.radii),
        **_spot_payload(overall),
        "fd": {name: curve.values.tolist() for name, curve in curves.items()},
    }
    if plane_results:
        payload["per_plane"] = {
            name: _spot_payload(spot) for name, spot in plane_results.items()
        }

    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        with open(args.out / "fd.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["frame", "scope", "fd"])
            for name, curve in curves.items():
                for i, value in enumerate(curve.values.tolist()):
                    writer.writerow([i + 1, name, repr(value)])
    _write_json(payload, args.out, "spot.json")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    config = PatternConfig(n_points=args.n_points, radii=args.radii)
    manifests = load_corpus(args.corpus)
    label = kind_label(args.kind)
    outcomes = []
    for manifest in manifests:
        if manifest.ground_truth is None:
            raise ValueError(
                f"sequence {manifest.sequence_id!r} has no apex annotation; "
                "evaluation needs ground truth"
            )
        volume = load_sequence(manifest)
        descriptors = extract_descriptors(volume, args.kind, config, threads=args.threads)
        if args.per_plane:
            overall, by_plane = per_plane_spots(descriptors, kind=label)
            per_plane_apex = {plane: spot.apex_frame for plane, spot in by_plane.items()}
        else:
            overall = spot_apex(fd_curve(descriptors, kind=label))
            per_plane_apex = None
        outcomes.append(
            SampleOutcome(
                sequence_id=manifest.sequence_id,
                spotted_apex=overall.apex_frame,
                true_apex=manifest.ground_truth.apex_frame,
                per_plane_apex=per_plane_apex,
            )
        )
    method = METHOD_LABELS.get(label, label)
    report = build_report(outcomes, method=method)
    table = render_table(report)
    sys.stdout.write(table + "\n")
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "report.txt").write_text(table + "\n")
        (args.out / "report.json").write_text(
            json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n"
        )
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    width, height, depth = args.size
    spec = SynthSpec(
        width=width,
        height=height,
        depth=depth,
        apex_frame=args.apex,
        amplitude=args.amplitude,
        bump_radius=args.bump_radius,
        texture_seed=args.seed,
        noise_sigma=args.noise,
        envelope=args.envelope,
    )
    volume, annotation = generate_sequence(spec)
    manifest_path = write_pgm_sequence(volume, annotation, args.out, args.sequence_id)
    sys.stdout.write(
        json.dumps(
            {
                "manifest": str(manifest_path),
                "frames": volume.depth,
                "onset": annotation.onset_frame,
                "apex": annotation.apex_frame,
                "offset": annotation.offset_frame,
            },
            indent=2,
            sort_keys=True,
        )
        + "\n"
    )
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    width, height, depth = args.size
    config = PatternConfig(n_points=args.n_points, radii=args.radii)
    result = run_benchmark(
        width,
        height,
        depth,
        args.kind,
        config,
        repetitions=args.reps,
        seed=args.seed,
        threads=args.threads,
    )
    _write_json(result.to_dict(), args.out, "bench.json")
    return 0


_DISPATCH = {
    "dump-geometry": _cmd_dump_geometry,
    "extract": _cmd_extract,
    "spot": _cmd_spot,
    "eval": _cmd_eval,
    "synth": _cmd_synth,
    "bench": _cmd_bench,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except Exception as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
