"""One-vs-rest linear support vector classifier.

Each class gets an L2-regularized hinge-loss scorer minimized by deterministic
per-sample subgradient descent: a fixed epoch count, seeded shuffling, and the
decaying step eta_t = eta0 / (1 + lambda * t) with a global step counter t.
The bias term is not regularized. Prediction is the argmax decision value with
ties going to the smaller class value.
"""

from __future__ import annotations

import numpy as np

from ..errors import TrainingError


def hinge_objective(w: np.ndarray, b: float, X: np.ndarray, targets: np.ndarray, lam: float) -> float:
    """Mean hinge loss plus (lambda/2)*||w||^2 for one binary scorer."""
    margins = targets * (X @ w + b)
    return float(np.mean(np.maximum(0.0, 1.0 - margins)) + 0.5 * lam * float(w @ w))


class LinearSVCModel:
    family = "svc"

    def __init__(self, weights: np.ndarray, biases: np.ndarray, class_universe: list[int], params: dict):
        self.weights = weights  # (n_classes, d)
        self.biases = biases  # (n_classes,)
        self.class_universe = class_universe
        self.params = params

    @property
    def feature_width(self) -> int:
        return int(self.weights.shape[1])

    def decision_values(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.feature_width:
            raise TrainingError(f"predict expects width {self.feature_width}, got {X.shape}")
        return X @ self.weights.T + self.biases

    def predict(self, X) -> np.ndarray:
        scores = self.decision_values(X)
        picks = scores.argmax(axis=1)  # first max -> smaller class value
        return np.asarray(self.class_universe, dtype=np.int64)[picks]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "class_universe": self.class_universe,
            "weights": self.weights.tolist(),
            "biases": self.biases.tolist(),
            "params": self.params,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "LinearSVCModel":
        return cls(
            weights=np.asarray(payload["weights"], dtype=np.float64),
            biases=np.asarray(payload["biases"], dtype=np.float64),
            class_universe=list(payload["class_universe"]),
            params=dict(payload["params"]),
        )


def train_linear_svc(X, y, lam: float = 0.01, epochs: int = 200, eta0: float = 1.0,
                     seed: int = 0) -> LinearSVCModel:
    """Train one-vs-rest hinge scorers by seeded subgradient descent."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise TrainingError("training set must be a non-empty 2-D matrix")
    if X.shape[0] != y.shape[0]:
        raise TrainingError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    if lam < 0 or eta0 <= 0 or epochs < 1:
        raise TrainingError("require lam >= 0, eta0 > 0, epochs >= 1")

    classes = np.unique(y).tolist()
    n, d = X.shape
    weights = np.zeros((len(classes), d))
    biases = np.zeros(len(classes))

    for k, cls in enumerate(classes):
        targets = np.where(y == cls, 1.0, -1.0)
        rng = np.random.default_rng(seed + k)
        w = np.zeros(d)
        b = 0.0
        t = 0
        for _ in range(epochs):
            for i in rng.permutation(n):
                t += 1
                eta = eta0 / (1.0 + lam * t)
                margin = targets[i] * (X[i] @ w + b)
                if margin < 1.0:
                    w -= eta * (lam * w - targets[i] * X[i])
                    b += eta * targets[i]
                else:
                    w -= eta * lam * w
        weights[k] = w
        biases[k] = b

    return LinearSVCModel(weights, biases, classes, {
        "lam": lam, "epochs": epochs, "eta0": eta0, "seed": seed,
    })
