"""Random forest of axis-aligned decision trees, built from scratch.

Each tree is grown on a bootstrap sample with sqrt(d) features examined per
node; candidate thresholds are the midpoints between consecutive sorted
unique values and splits are scored by Gini, information gain, or gain ratio.
Per-tree seeds are derived as seed + tree index so a parallel build would
reproduce the sequential result exactly. Prediction is a majority vote with
ties going to the smaller class value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import TrainingError

_EPS_SPLIT_INFO = 1e-12


def gini_impurity(counts: np.ndarray) -> np.ndarray:
    """1 - sum p^2 for count vectors along the last axis."""
    counts = np.asarray(counts, dtype=np.float64)
    totals = counts.sum(axis=-1, keepdims=True)
    safe = np.where(totals == 0.0, 1.0, totals)
    p = counts / safe
    return 1.0 - (p * p).sum(axis=-1)


def entropy_bits(counts: np.ndarray) -> np.ndarray:
    """Shannon entropy in bits for count vectors along the last axis."""
    counts = np.asarray(counts, dtype=np.float64)
    totals = counts.sum(axis=-1, keepdims=True)
    safe = np.where(totals == 0.0, 1.0, totals)
    p = counts / safe
    terms = np.where(p > 0.0, p * np.log2(np.where(p > 0.0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


@dataclass
class _Tree:
    """Flat-array tree: leaves have feature == -1 and carry a class index."""

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    leaf_class: list[int] = field(default_factory=list)

    def add_node(self) -> int:
        for arr, default in ((self.feature, -1), (self.threshold, 0.0), (self.left, -1),
                             (self.right, -1), (self.leaf_class, -1)):
            arr.append(default)
        return len(self.feature) - 1

    def predict_index(self, row: np.ndarray) -> int:
        node = 0
        while self.feature[node] >= 0:
            node = self.left[node] if row[self.feature[node]] <= self.threshold[node] else self.right[node]
        return self.leaf_class[node]

    def to_dict(self) -> dict:
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left,
            "right": self.right,
            "leaf_class": self.leaf_class,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "_Tree":
        return cls(
            feature=list(payload["feature"]),
            threshold=[float(t) for t in payload["threshold"]],
            left=list(payload["left"]),
            right=list(payload["right"]),
            leaf_class=list(payload["leaf_class"]),
        )


def _split_scores(values: np.ndarray, y_idx: np.ndarray, n_classes: int, criterion: str, min_leaf: int):
    """Score every midpoint threshold of one feature within a node.

    Returns (thresholds, scores) where higher is better, or None when the
    feature is constant or no split respects min_leaf.
    """
    order = np.argsort(values, kind="stable")
    v_sorted = values[order]
    one_hot = np.zeros((values.shape[0], n_classes))
    one_hot[np.arange(values.shape[0]), y_idx[order]] = 1.0
    cum = np.cumsum(one_hot, axis=0)

    boundaries = np.flatnonzero(v_sorted[:-1] < v_sorted[1:]) + 1  # left sizes
    if boundaries.size == 0:
        return None
    n = values.shape[0]
    valid = (boundaries >= min_leaf) & (n - boundaries >= min_leaf)
    boundaries = boundaries[valid]
    if boundaries.size == 0:
        return None

    left_counts = cum[boundaries - 1]
    total = cum[-1]
    right_counts = total - left_counts
    n_left = boundaries.astype(np.float64)
    n_right = n - n_left

    parent_counts = total
    if criterion == "gini":
        parent = gini_impurity(parent_counts)
        child = (n_left * gini_impurity(left_counts) + n_right * gini_impurity(right_counts)) / n
        scores = parent - child
    else:
        parent = entropy_bits(parent_counts)
        child = (n_left * entropy_bits(left_counts) + n_right * entropy_bits(right_counts)) / n
        scores = parent - child
        if criterion == "gain_ratio":
            split_info = entropy_bits(np.stack([n_left, n_right], axis=-1))
            usable = split_info >= _EPS_SPLIT_INFO
            scores = np.where(usable, scores / np.where(usable, split_info, 1.0), -np.inf)

    thresholds = (v_sorted[boundaries - 1] + v_sorted[boundaries]) / 2.0
    return thresholds, scores


def _grow_tree(X: np.ndarray, y_idx: np.ndarray, n_classes: int, rng: np.random.Generator,
               criterion: str, min_leaf: int, max_depth: int | None, max_features: int) -> _Tree:
    tree = _Tree()
    root = tree.add_node()
    stack = [(root, np.arange(X.shape[0]), 0)]
    d = X.shape[1]

    while stack:
        node, rows, depth = stack.pop()
        counts = np.bincount(y_idx[rows], minlength=n_classes)
        pure = np.count_nonzero(counts) <= 1
        if pure or rows.shape[0] < 2 * min_leaf or (max_depth is not None and depth >= max_depth):
            tree.leaf_class[node] = int(np.argmax(counts))
            continue

        candidates = rng.choice(d, size=min(max_features, d), replace=False)
        best = None  # (score, feature, threshold)
        remaining = [f for f in range(d) if f not in set(candidates.tolist())]
        for pool in (candidates.tolist(), remaining):
            for f in pool:
                scored = _split_scores(X[rows, f], y_idx[rows], n_classes, criterion, min_leaf)
                if scored is None:
                    continue
                thresholds, scores = scored
                pick = int(np.argmax(scores))
                if not np.isfinite(scores[pick]):
                    continue
                if best is None or scores[pick] > best[0]:
                    best = (float(scores[pick]), f, float(thresholds[pick]))
            if best is not None:
                break  # only fall through to the remaining features if the sample was all-constant

        if best is None:
            tree.leaf_class[node] = int(np.argmax(counts))
            continue

        _, f, thr = best
        go_left = X[rows, f] <= thr
        left = tree.add_node()
        right = tree.add_node()
        tree.feature[node] = f
        tree.threshold[node] = thr
        tree.left[node] = left
        tree.right[node] = right
        stack.append((right, rows[~go_left], depth + 1))
        stack.append((left, rows[go_left], depth + 1))
    return tree


class RandomForestModel:
    """Trained forest with the uniform predict contract."""

    family = "rf"

    def __init__(self, trees: list[_Tree], class_universe: list[int], feature_width: int, params: dict):
        self.trees = trees
        self.class_universe = class_universe
        self.feature_width = feature_width
        self.params = params

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.feature_width:
            raise TrainingError(f"predict expects width {self.feature_width}, got {X.shape}")
        votes = np.zeros((X.shape[0], len(self.class_universe)), dtype=np.int64)
        for tree in self.trees:
            for i, row in enumerate(X):
                votes[i, tree.predict_index(row)] += 1
        # argmax returns the first maximum; class_universe is sorted so ties
        # resolve to the smaller class value.
        picks = votes.argmax(axis=1)
        return np.asarray(self.class_universe, dtype=np.int64)[picks]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "class_universe": self.class_universe,
            "feature_width": self.feature_width,
            "params": self.params,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "RandomForestModel":
        return cls(
            trees=[_Tree.from_dict(t) for t in payload["trees"]],
            class_universe=list(payload["class_universe"]),
            feature_width=int(payload["feature_width"]),
            params=dict(payload["params"]),
        )


def train_random_forest(X, y, n_trees: int = 100, criterion: str = "gini",
                        min_samples_leaf: int = 1, max_depth: int | None = None,
                        seed: int = 0) -> RandomForestModel:
    """Fit a seeded forest; tree t uses generator seed ``seed + t``."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise TrainingError("training set must be a non-empty 2-D matrix")
    if X.shape[0] != y.shape[0]:
        raise TrainingError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    if criterion not in ("gini", "info_gain", "gain_ratio"):
        raise TrainingError(f"unknown criterion {criterion!r}")
    if n_trees < 1:
        raise TrainingError("need at least one tree")

    classes = np.unique(y).tolist()
    index_of = {c: i for i, c in enumerate(classes)}
    y_idx = np.array([index_of[c] for c in y], dtype=np.int64)
    n, d = X.shape
    max_features = max(1, int(np.sqrt(d)))

    trees = []
    for t in range(n_trees):
        rng = np.random.default_rng(seed + t)
        sample = rng.integers(0, n, size=n)
        trees.append(
            _grow_tree(X[sample], y_idx[sample], len(classes), rng, criterion,
                       min_samples_leaf, max_depth, max_features)
        )
    return RandomForestModel(trees, classes, d, {
        "n_trees": n_trees, "criterion": criterion, "min_samples_leaf": min_samples_leaf,
        "max_depth": max_depth, "seed": seed,
    })
