"""Stratified k-fold splitting and the accuracy metric.

Within each class the rows are shuffled by a seeded generator and dealt
round-robin to folds. Classes with fewer members than folds start their deal
at fold (class_value mod k) so small classes spread across different folds
rather than piling onto fold 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FeatureError


@dataclass(frozen=True)
class FoldPlan:
    """Per-row fold assignments for k-fold cross-validation."""

    k: int
    assignments: np.ndarray

    def __post_init__(self) -> None:
        assignments = np.asarray(self.assignments, dtype=np.int64)
        assignments.setflags(write=False)
        object.__setattr__(self, "assignments", assignments)
        if self.k < 2:
            raise FeatureError(f"k must be >= 2, got {self.k}")
        if assignments.min(initial=0) < 0 or assignments.max(initial=0) >= self.k:
            raise FeatureError("fold assignments out of range")
        sizes = np.bincount(assignments, minlength=self.k)
        if (sizes == 0).any():
            empty = int(np.flatnonzero(sizes == 0)[0])
            raise FeatureError(f"fold {empty} is empty; not enough spread across classes")


def stratified_kfold(y, k: int = 3, seed: int = 0) -> FoldPlan:
    """Deal each class's shuffled rows round-robin into k folds.

    Classes with >= k members start at fold 0 (their per-fold counts differ
    by at most 1); classes with < k members start at fold (class_value mod k).

    Raises:
        FeatureError: If n < k or the deal leaves a fold empty.
    """
    y = np.asarray(getattr(y, "classes", y), dtype=np.int64)
    n = y.shape[0]
    if n < k:
        raise FeatureError(f"need at least k={k} rows, got {n}")
    rng = np.random.default_rng(seed)
    assignments = np.full(n, -1, dtype=np.int64)
    for cls in np.unique(y):
        rows = np.flatnonzero(y == cls)
        shuffled = rng.permutation(rows)
        start = 0 if rows.shape[0] >= k else int(cls) % k
        for j, row in enumerate(shuffled):
            assignments[row] = (start + j) % k
    return FoldPlan(k=k, assignments=assignments)


def iter_folds(plan: FoldPlan):
    """Yield (train_indices, test_indices) for each fold in order."""
    indices = np.arange(plan.assignments.shape[0])
    for fold in range(plan.k):
        test = plan.assignments == fold
        yield indices[~test], indices[test]


def accuracy(pred, truth) -> float:
    """Fraction of exact class matches."""
    pred = np.asarray(pred)
    truth = np.asarray(getattr(truth, "classes", truth))
    if pred.shape != truth.shape:
        raise FeatureError(f"length mismatch: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise FeatureError("accuracy of empty predictions is undefined")
    return float(np.mean(pred == truth))
