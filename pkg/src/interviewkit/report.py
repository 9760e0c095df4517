"""Human-readable candidate feedback built from per-label predictions.

Each predicted class maps to a band (needs-work 1-2, adequate 3-5, strong
6-7 by default); each (label, band) pair has a fixed template sentence; and
the candidate's five strongest selected features (by absolute standardized
value) are listed as the drivers behind the score. Regenerating a report
from the same bundle and inputs produces identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .bundle import ModelBundle
from .errors import InterviewKitError
from .manifest import LABEL_NAMES
from .preprocess import standardize_apply

DEFAULT_BANDS = {"needs-work": (1, 2), "adequate": (3, 5), "strong": (6, 7)}
TOP_FEATURES = 5


def load_templates() -> dict[str, dict[str, str]]:
    with resources.files("interviewkit.data").joinpath("feedback_templates.json").open(encoding="utf-8") as fh:
        return json.load(fh)


def band_for(score: int, bands: dict[str, tuple[int, int]] | None = None) -> str:
    """Map a 1-7 class to its feedback band; total and order-preserving."""
    bands = bands or DEFAULT_BANDS
    for name, (lo, hi) in bands.items():
        if lo <= score <= hi:
            return name
    raise InterviewKitError(f"score {score} outside all bands {bands}")


@dataclass(frozen=True)
class LabelFeedback:
    predicted: int
    band: str
    feedback: str
    top_features: tuple[tuple[str, float], ...]  # (name, standardized value)


@dataclass(frozen=True)
class FeedbackReport:
    record_id: str
    labels: dict[str, LabelFeedback]

    def to_dict(self) -> dict:
        return {
            "record_id": self.record_id,
            "labels": {
                name: {
                    "predicted": fb.predicted,
                    "band": fb.band,
                    "feedback": fb.feedback,
                    "top_features": [{"name": n, "zscore": z} for n, z in fb.top_features],
                }
                for name, fb in self.labels.items()
            },
        }

    def to_text(self) -> str:
        lines = [f"Candidate feedback for {self.record_id}", "=" * (23 + len(self.record_id)), ""]
        for name in LABEL_NAMES:
            fb = self.labels[name]
            lines.append(f"{name}: {fb.predicted}/7 [{fb.band}]")
            lines.append(f"  {fb.feedback}")
            if fb.top_features:
                drivers = ", ".join(f"{n} (z={z:+.2f})" for n, z in fb.top_features)
                lines.append(f"  Strongest signals: {drivers}")
            lines.append("")
        return "\n".join(lines)


def _top_contributors(bundle: ModelBundle, row: np.ndarray) -> tuple[tuple[str, float], ...]:
    """Selected features ranked by |z| of the candidate's row, ties by column."""
    kept = list(bundle.final_columns())
    if not kept:
        return ()
    z = standardize_apply(bundle.standardizer, row.reshape(1, -1))[0]
    ranked = sorted(kept, key=lambda c: (-abs(z[c]), c))[:TOP_FEATURES]
    return tuple((bundle.column_names[c], float(z[c])) for c in ranked)


def render_report(record_id: str, predictions: dict[str, int],
                  bundles: dict[str, ModelBundle], rows: dict[str, np.ndarray],
                  bands: dict[str, tuple[int, int]] | None = None) -> FeedbackReport:
    """Build the deterministic feedback report for one candidate.

    Args:
        predictions: Predicted class per label; all nine must be present.
        bundles: Per-label trained bundles (for the selected feature sets).
        rows: The candidate's fused feature row per label, matching each
            bundle's modality mask.

    Raises:
        InterviewKitError: If any of the nine labels is missing.
    """
    templates = load_templates()
    missing = [name for name in LABEL_NAMES if name not in predictions]
    if missing:
        raise InterviewKitError(f"predictions missing labels: {missing}")

    labels: dict[str, LabelFeedback] = {}
    for name in LABEL_NAMES:
        score = int(predictions[name])
        band = band_for(score, bands)
        bundle = bundles.get(name)
        top = _top_contributors(bundle, rows[name]) if bundle is not None else ()
        labels[name] = LabelFeedback(
            predicted=score,
            band=band,
            feedback=templates[name][band],
            top_features=top,
        )
    return FeedbackReport(record_id=record_id, labels=labels)


def write_report(report: FeedbackReport, out_dir: str | Path) -> tuple[Path, Path]:
    """Write the text and JSON forms; returns both paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    text_path = out_dir / f"report_{report.record_id}.txt"
    json_path = out_dir / f"report_{report.record_id}.json"
    text_path.write_text(report.to_text(), encoding="utf-8")
    json_path.write_text(json.dumps(report.to_dict(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return text_path, json_path
