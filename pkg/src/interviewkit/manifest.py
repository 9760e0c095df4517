"""Dataset manifest: interview records with media paths and ground-truth labels.

A manifest is a single JSON file with a top-level ``{"records": [...]}`` array.
Each record carries an id, paths to the audio / landmark-track / transcript
files (relative to the manifest's directory), the recording duration in
seconds, and integer scores in [1, 7] for the nine behavioral labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ManifestError

#: Canonical label names, in fixed reporting order.
LABEL_NAMES = (
    "EyeContact",
    "SpeakingRate",
    "Engaged",
    "Pauses",
    "Calmness",
    "NotStressed",
    "Focused",
    "Authentic",
    "NotAwkward",
)

SCORE_MIN = 1
SCORE_MAX = 7


@dataclass(frozen=True)
class InterviewRecord:
    """One recorded interview: media paths plus per-label integer scores.

    ``labels`` is None for prediction-time records that carry no ground truth.
    All paths are absolute (resolved against the manifest directory at load).
    """

    id: str
    audio_path: Path
    landmarks_path: Path
    transcript_path: Path
    duration_s: float
    labels: dict[str, int] | None

    def __post_init__(self) -> None:
        if not self.id:
            raise ManifestError("record id must be non-empty")
        if not (self.duration_s > 0):
            raise ManifestError(f"record {self.id!r}: duration_s must be > 0, got {self.duration_s}")
        if self.labels is not None:
            _validate_labels(self.id, self.labels)


def _validate_labels(record_id: str, labels: dict[str, int]) -> None:
    expected = set(LABEL_NAMES)
    present = set(labels)
    if present != expected:
        missing = sorted(expected - present)
        extra = sorted(present - expected)
        parts = []
        if missing:
            parts.append(f"missing labels {missing}")
        if extra:
            parts.append(f"unexpected labels {extra}")
        raise ManifestError(f"record {record_id!r}: " + "; ".join(parts))
    for name in LABEL_NAMES:
        score = labels[name]
        if not isinstance(score, int) or isinstance(score, bool):
            raise ManifestError(f"record {record_id!r}: {name} score must be an integer, got {score!r}")
        if not (SCORE_MIN <= score <= SCORE_MAX):
            raise ManifestError(f"record {record_id!r}: {name} ∉ [{SCORE_MIN},{SCORE_MAX}] (got {score})")


def load_manifest(path: str | Path, require_labels: bool = True) -> list[InterviewRecord]:
    """Load and validate a manifest file, returning records in file order.

    Args:
        path: Manifest JSON file; record paths resolve against its directory.
        require_labels: When False, records may omit ``labels`` (used at
            prediction time). Labels that are present are still validated.

    Raises:
        ManifestError: On parse failure or any invariant violation; messages
            name the offending record id and field.
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc

    if not isinstance(payload, dict) or "records" not in payload:
        raise ManifestError(f"manifest {path}: expected top-level object with a 'records' array")
    raw_records = payload["records"]
    if not isinstance(raw_records, list):
        raise ManifestError(f"manifest {path}: 'records' must be an array")

    base = path.parent
    records = []
    seen_ids: set[str] = set()
    for index, raw in enumerate(raw_records):
        if not isinstance(raw, dict):
            raise ManifestError(f"manifest {path}: record #{index} is not an object")
        record_id = raw.get("id")
        if not isinstance(record_id, str) or not record_id:
            raise ManifestError(f"manifest {path}: record #{index} has no string 'id'")
        if record_id in seen_ids:
            raise ManifestError(f"record {record_id!r}: duplicate id")
        seen_ids.add(record_id)

        for field in ("audio", "landmarks", "transcript"):
            if not isinstance(raw.get(field), str):
                raise ManifestError(f"record {record_id!r}: missing or non-string {field!r} path")
        duration = raw.get("duration_s")
        if not isinstance(duration, (int, float)) or isinstance(duration, bool):
            raise ManifestError(f"record {record_id!r}: duration_s must be a number")

        labels = raw.get("labels")
        if labels is None:
            if require_labels:
                raise ManifestError(f"record {record_id!r}: missing 'labels'")
        elif not isinstance(labels, dict):
            raise ManifestError(f"record {record_id!r}: 'labels' must be an object")

        records.append(
            InterviewRecord(
                id=record_id,
                audio_path=base / raw["audio"],
                landmarks_path=base / raw["landmarks"],
                transcript_path=base / raw["transcript"],
                duration_s=float(duration),
                labels=None if labels is None else {k: v for k, v in labels.items()},
            )
        )
    return records
