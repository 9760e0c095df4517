"""Feature matrices, label vectors, and multimodal fusion.

A FeatureMatrix is an n-by-d float matrix with named, modality-tagged columns
and one row per interview record. Per-modality matrices produced by the three
extractors are fused by horizontal concatenation in the fixed modality order
audio, video, lexical so that column indices are stable across runs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import FeatureError

#: Fixed concatenation order for fusion; also the canonical CSV emit order.
MODALITY_ORDER = ("audio", "video", "lexical")


@dataclass(frozen=True)
class Column:
    """Descriptor for one feature column."""

    name: str
    modality: str

    def __post_init__(self) -> None:
        if self.modality not in MODALITY_ORDER:
            raise FeatureError(f"unknown modality {self.modality!r} for column {self.name!r}")


@dataclass(frozen=True)
class FeatureVector:
    """A single named feature row, as produced by the per-recording extractors."""

    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or len(self.names) != values.shape[0]:
            raise FeatureError("feature vector names and values must have equal length")
        if not np.all(np.isfinite(values)):
            bad = [self.names[i] for i in np.flatnonzero(~np.isfinite(values))]
            raise FeatureError(f"non-finite feature values: {bad}")


@dataclass(frozen=True)
class FeatureMatrix:
    """n-by-d matrix of finite floats with named, modality-tagged columns."""

    values: np.ndarray
    columns: tuple[Column, ...]
    row_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise FeatureError(f"feature matrix must be 2-D, got shape {values.shape}")
        values = np.ascontiguousarray(values)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "row_ids", tuple(self.row_ids))
        n, d = values.shape
        if len(self.row_ids) != n:
            raise FeatureError(f"row_ids length {len(self.row_ids)} != row count {n}")
        if len(self.columns) != d:
            raise FeatureError(f"column count {len(self.columns)} != width {d}")
        if not np.all(np.isfinite(values)):
            rows, cols = np.nonzero(~np.isfinite(values))
            raise FeatureError(
                f"non-finite entry at row {self.row_ids[rows[0]]!r}, column {self.columns[cols[0]].name!r}"
            )
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise FeatureError(f"duplicate column names: {dupes}")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def modalities(self) -> tuple[str, ...]:
        """Distinct modalities present, in canonical order."""
        present = {c.modality for c in self.columns}
        return tuple(m for m in MODALITY_ORDER if m in present)


def matrix_from_rows(rows: Sequence[tuple[str, FeatureVector]], modality: str) -> FeatureMatrix:
    """Stack per-recording feature vectors into a single-modality matrix."""
    if not rows:
        raise FeatureError("cannot build a feature matrix from zero rows")
    names = rows[0][1].names
    for rid, vec in rows:
        if vec.names != names:
            raise FeatureError(f"row {rid!r} has mismatched feature names")
    values = np.vstack([vec.values for _, vec in rows])
    columns = tuple(Column(name, modality) for name in names)
    return FeatureMatrix(values, columns, tuple(rid for rid, _ in rows))


@dataclass(frozen=True)
class LabelVector:
    """Integer class targets in [1, 7] for one label, aligned to a FeatureMatrix."""

    label_name: str
    classes: np.ndarray

    def __post_init__(self) -> None:
        classes = np.asarray(self.classes, dtype=np.int64)
        classes.setflags(write=False)
        object.__setattr__(self, "classes", classes)
        if classes.ndim != 1:
            raise FeatureError("label vector must be 1-D")
        if classes.size and (classes.min() < 1 or classes.max() > 7):
            raise FeatureError(f"label {self.label_name!r}: scores outside [1,7]")

    def __len__(self) -> int:
        return int(self.classes.shape[0])


def normalize_mask(mask: Iterable[str]) -> tuple[str, ...]:
    """Validate a modality mask and return it in canonical order."""
    selected = set(mask)
    unknown = selected - set(MODALITY_ORDER)
    if unknown:
        raise FeatureError(f"unknown modalities in mask: {sorted(unknown)}")
    if not selected:
        raise FeatureError("modality mask must be non-empty")
    return tuple(m for m in MODALITY_ORDER if m in selected)


def fuse_features(parts: Sequence[FeatureMatrix], mask: Iterable[str]) -> FeatureMatrix:
    """Concatenate per-modality matrices selected by ``mask``.

    Columns are ordered audio, video, lexical; within a modality they keep the
    part's own order. All parts must share identical row_ids in identical
    order, and no two parts may carry the same modality.

    Raises:
        FeatureError: On row-id mismatch, overlapping or mixed-modality parts,
            or a mask that selects no part.
    """
    mask = normalize_mask(mask)
    if not parts:
        raise FeatureError("fuse_features requires at least one part")

    by_modality: dict[str, FeatureMatrix] = {}
    for part in parts:
        mods = part.modalities()
        if len(mods) != 1:
            raise FeatureError(f"each part must carry exactly one modality, got {mods}")
        if mods[0] in by_modality:
            raise FeatureError(f"duplicate modality {mods[0]!r} across parts")
        by_modality[mods[0]] = part

    row_ids = parts[0].row_ids
    for part in parts[1:]:
        if part.row_ids != row_ids:
            raise FeatureError("row-id mismatch across parts")

    chosen = [by_modality[m] for m in MODALITY_ORDER if m in by_modality and m in mask]
    if not chosen:
        raise FeatureError(f"mask {mask} selects no part")

    values = np.hstack([p.values for p in chosen])
    columns = tuple(col for p in chosen for col in p.columns)
    return FeatureMatrix(values, columns, row_ids)


# -- CSV interchange --------------------------------------------------------
#
# One row per recording, record id in the first column, canonical feature
# names in the header. Floats use repr() so a re-read round-trips exactly.


def write_feature_csv(matrix: FeatureMatrix, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("id",) + matrix.column_names)
        for rid, row in zip(matrix.row_ids, matrix.values):
            writer.writerow((rid,) + tuple(repr(float(v)) for v in row))


def read_feature_csv(path: str | Path, modality: str) -> FeatureMatrix:
    path = Path(path)
    if not path.is_file():
        raise FeatureError(f"feature CSV not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FeatureError(f"feature CSV {path} is empty") from None
        if not header or header[0] != "id":
            raise FeatureError(f"feature CSV {path}: first header column must be 'id'")
        names = header[1:]
        row_ids = []
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise FeatureError(f"feature CSV {path}: line {line_no} has {len(row)} fields, expected {len(header)}")
            row_ids.append(row[0])
            rows.append([float(v) for v in row[1:]])
    values = np.asarray(rows, dtype=np.float64).reshape(len(row_ids), len(names))
    columns = tuple(Column(name, modality) for name in names)
    return FeatureMatrix(values, columns, tuple(row_ids))
