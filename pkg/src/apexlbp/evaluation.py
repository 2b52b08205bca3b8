"""Scoring spotted apex frames against ground-truth annotations.

Metrics: MAE (mean absolute deviation in frames), SE (standard error,
sigma / sqrt(N), with sigma the N-1 sample standard deviation of the
absolute deviations) and the exact-hit percentage.  Reports render next to
a fixed set of literature baselines which are quoted constants, never
recomputed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .geometry import PlaneId

#: Literature baselines (method -> (MAE, SE)); quoted, not recomputed.
QUOTED_BASELINES: dict[str, tuple[float, float]] = {
    "LBP (BS-RoIs)": (5.20, 0.58),
    "RHOOF": (3.60, 0.35),
    "LBP-TOP": (2.54, 0.23),
    "LBP-SIPl": (1.76, 0.12),
}

#: Canonical report labels for computed descriptor kinds.
METHOD_LABELS = {
    "lbp-sipl": "LBP-SIPl",
    "lbp-top": "LBP-TOP",
}

#: |computed MAE - quoted MAE| at or below this counts as consistent.
CONSISTENCY_MAE_MARGIN = 0.5


class PlaneStats(NamedTuple):
    mae: float
    exact_hit_rate: float


@dataclass(frozen=True)
class SampleOutcome:
    """One sequence's spotted apex versus its ground truth."""

    sequence_id: str
    spotted_apex: int
    true_apex: int
    per_plane_apex: Optional[dict[PlaneId, int]] = None

    @property
    def error(self) -> int:
        return self.spotted_apex - self.true_apex


@dataclass
class EvalReport:
    """Aggregate spotting quality over a corpus."""

    method: str
    sample_count: int
    errors: list[int]
    mae: float
    se: Optional[float]
    exact_hit_rate: float
    per_plane: Optional[dict[PlaneId, PlaneStats]] = None
    samples: list[SampleOutcome] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


def mae(errors: list[int] | list[float]) -> float:
    """Mean absolute deviation."""
    if not errors:
        raise ValueError("mae needs at least one error value")
    return sum(abs(e) for e in errors) / len(errors)


def se(errors: list[int] | list[float]) -> float:
    """Standard error of the absolute deviations: sigma / sqrt(N), sigma with N-1."""
    n = len(errors)
    if n < 2:
        raise ValueError("se needs at least two error values")
    magnitudes = [abs(e) for e in errors]
    mean = sum(magnitudes) / n
    variance = sum((m - mean) ** 2 for m in magnitudes) / (n - 1)
    return math.sqrt(variance) / math.sqrt(n)


def exact_hit_rate(spotted: list[int], truths: list[int]) -> float:
    """Percentage of samples whose spotted apex equals the ground truth."""
    if len(spotted) != len(truths):
        raise ValueError(
            f"spotted/truth length mismatch: {len(spotted)} vs {len(truths)}"
        )
    if not spotted:
        raise ValueError("exact_hit_rate needs at least one sample")
    hits = sum(1 for s, t in zip(spotted, truths) if s == t)
    return 100.0 * hits / len(spotted)


def build_report(outcomes: list[SampleOutcome], method: str) -> EvalReport:
    """Aggregate a corpus of outcomes into an EvalReport.

    A per-plane breakdown appears when every outcome carries per-plane
    spots.  The SE convention (absolute deviations, N-1 denominator) is
    recorded in the metadata so results stay auditable.
    """
    if not outcomes:
        raise ValueError("cannot build a report from zero samples")
    errors = [o.error for o in outcomes]
    spotted = [o.spotted_apex for o in outcomes]
    truths = [o.true_apex for o in outcomes]
    per_plane = None
    if all(o.per_plane_apex for o in outcomes):
        planes = outcomes[0].per_plane_apex.keys()
        per_plane = {}
        for plane in planes:
            plane_spots = [o.per_plane_apex[plane] for o in outcomes]
            plane_errors = [s - t for s, t in zip(plane_spots, truths)]
            per_plane[plane] = PlaneStats(
                mae=mae(plane_errors),
                exact_hit_rate=exact_hit_rate(plane_spots, truths),
            )
    return EvalReport(
        method=method,
        sample_count=len(outcomes),
        errors=errors,
        mae=mae(errors),
        se=se(errors) if len(errors) >= 2 else None,
        exact_hit_rate=exact_hit_rate(spotted, truths),
        per_plane=per_plane,
        samples=list(outcomes),
        metadata={
            "se_convention": "sample standard deviation of |e| with N-1 denominator, divided by sqrt(N)",
            "preprocessing": "grayscale conversion only; no face alignment or cropping",
        },
    )


def comparison_verdict(report: EvalReport) -> Optional[str]:
    """'consistent' or 'divergent' against the quoted row for this method, if any."""
    reference = QUOTED_BASELINES.get(report.method)
    if reference is None:
        return None
    return "consistent" if abs(report.mae - reference[0]) <= CONSISTENCY_MAE_MARGIN else "divergent"


def render_table(report: EvalReport) -> str:
    """Fixed-width comparison table: quoted baselines plus the computed row."""
    rows: list[tuple[str, str, str]] = [("Method", "MAE", "SE")]
    for name, (q_mae, q_se) in QUOTED_BASELINES.items():
        rows.append((f"{name} [quoted]", f"{q_mae:.2f}", f"{q_se:.2f}"))
    se_text = f"{report.se:.2f}" if report.se is not None else "-"
    rows.append((f"{report.method} [computed]", f"{report.mae:.2f}", se_text))

    name_w = max(len(r[0]) for r in rows)
    mae_w = max(len(r[1]) for r in rows)
    se_w = max(len(r[2]) for r in rows)
    lines = [
        f"{name.ljust(name_w)}  {m.rjust(mae_w)}  {s.rjust(se_w)}"
        for name, m, s in rows
    ]
    lines.insert(1, "-" * len(lines[0]))
    lines.append(f"N = {report.sample_count}, exact hits = {report.exact_hit_rate:.1f}%")
    verdict = comparison_verdict(report)
    if verdict is not None:
        reference = QUOTED_BASELINES[report.method]
        lines.append(
            f"computed vs quoted {report.method}: |{report.mae:.2f} - {reference[0]:.2f}| "
            f"{'<=' if verdict == 'consistent' else '>'} {CONSISTENCY_MAE_MARGIN:.1f} -> {verdict}"
        )
    if report.per_plane:
        lines.append("")
        lines.append("Per-plane breakdown:")
        for plane, stats in report.per_plane.items():
            lines.append(
                f"  {plane.value:<7} MAE {stats.mae:6.2f}   exact hits {stats.exact_hit_rate:5.1f}%"
            )
    lines.append("Quoted rows reproduce published numbers and are not recomputed here.")
    return "\n".join(lines)


def report_to_dict(report: EvalReport) -> dict:
    """JSON-ready view of a report, including the quoted baselines."""
    out = {
        "method": report.method,
        "sample_count": report.sample_count,
        "mae": report.mae,
        "se": report.se,
        "exact_hit_rate": report.exact_hit_rate,
        "errors": report.errors,
        "samples": [
            {
                "sequence_id": o.sequence_id,
                "spotted_apex": o.spotted_apex,
                "true_apex": o.true_apex,
                "error": o.error,
            }
            for o in report.samples
        ],
        "quoted_baselines": {
            name: {"mae": m, "se": s, "quoted": True}
            for name, (m, s) in QUOTED_BASELINES.items()
        },
        "metadata": report.metadata,
    }
    verdict = comparison_verdict(report)
    if verdict is not None:
        out["comparison"] = {
            "reference_method": report.method,
            "reference_mae": QUOTED_BASELINES[report.method][0],
            "mae_margin": CONSISTENCY_MAE_MARGIN,
            "verdict": verdict,
        }
    if report.per_plane is not None:
        out["per_plane"] = {
            plane.value: {"mae": stats.mae, "exact_hit_rate": stats.exact_hit_rate}
            for plane, stats in report.per_plane.items()
        }
    return out
