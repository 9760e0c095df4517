"""Exhaustive hyperparameter grid search over shared stratified folds."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..errors import TrainingError
from ..evaluation import accuracy, iter_folds, stratified_kfold


@dataclass(frozen=True)
class GridPoint:
    """One evaluated grid cell: hyperparameters and per-fold accuracies."""

    hyperparams: dict
    fold_accuracies: tuple[float, ...]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracies))


def expand_grid(grid: dict[str, list]) -> list[dict]:
    """Cartesian product in key insertion order; values keep list order."""
    if not grid:
        raise TrainingError("hyperparameter grid must be non-empty")
    keys = list(grid)
    return [dict(zip(keys, combo)) for combo in product(*(grid[k] for k in keys))]


def grid_search(family: str, grid: dict[str, list], X, y, folds: int = 3, seed: int = 0):
    """Score every grid point by mean stratified-fold accuracy.

    All points share one fold plan (derived from y, folds, seed). Returns
    (best ModelSpec, list of GridPoint); ties on the mean go to the earlier
    point in grid order.
    """
    from . import ModelSpec, train_model  # deferred to avoid a circular import

    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if folds < 2:
        raise TrainingError(f"grid search needs folds >= 2, got {folds}")
    plan = stratified_kfold(y, k=folds, seed=seed)

    table: list[GridPoint] = []
    best_index = 0
    for idx, hp in enumerate(expand_grid(grid)):
        spec = ModelSpec(family, hp, seed=seed)
        fold_accs = []
        for train_idx, test_idx in iter_folds(plan):
            model = train_model(X[train_idx], y[train_idx], spec)
            fold_accs.append(accuracy(model.predict(X[test_idx]), y[test_idx]))
        point = GridPoint(hyperparams=hp, fold_accuracies=tuple(fold_accs))
        table.append(point)
        if point.mean_accuracy > table[best_index].mean_accuracy:
            best_index = idx

    best = ModelSpec(family, table[best_index].hyperparams, seed=seed)
    return best, table
