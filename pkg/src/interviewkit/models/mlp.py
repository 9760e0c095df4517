"""Multilayer perceptron: ReLU hidden layers, softmax output, cross-entropy.

Training is full-batch gradient descent with a fixed learning rate and epoch
count (no early stopping, for determinism). Weights start from the seeded
uniform(-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))) range, biases
from zero. A non-finite loss aborts training with the epoch index.
"""

from __future__ import annotations

import numpy as np

from ..errors import TrainingError


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def init_layers(layer_sizes: list[int], seed: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def forward(X: np.ndarray, weights: list[np.ndarray], biases: list[np.ndarray]):
    """Returns (probabilities, activations, pre-activations)."""
    activations = [X]
    pre = []
    a = X
    for l, (w, b) in enumerate(zip(weights, biases)):
        z = a @ w + b
        pre.append(z)
        a = np.maximum(z, 0.0) if l < len(weights) - 1 else z
        activations.append(a)
    return softmax(pre[-1]), activations, pre


def cross_entropy(probs: np.ndarray, y_idx: np.ndarray) -> float:
    picked = probs[np.arange(probs.shape[0]), y_idx]
    return float(-np.mean(np.log(np.maximum(picked, 1e-300))))


def gradients(X: np.ndarray, y_idx: np.ndarray, weights: list[np.ndarray], biases: list[np.ndarray]):
    """Analytic full-batch gradients of the mean cross-entropy loss."""
    n = X.shape[0]
    probs, activations, pre = forward(X, weights, biases)
    target = np.zeros_like(probs)
    target[np.arange(n), y_idx] = 1.0
    delta = (probs - target) / n

    grad_w = [np.empty(0)] * len(weights)
    grad_b = [np.empty(0)] * len(biases)
    for l in range(len(weights) - 1, -1, -1):
        grad_w[l] = activations[l].T @ delta
        grad_b[l] = delta.sum(axis=0)
        if l > 0:
            delta = (delta @ weights[l].T) * (pre[l - 1] > 0.0)
    return grad_w, grad_b, probs


class MLPModel:
    family = "mlp"

    def __init__(self, weights: list[np.ndarray], biases: list[np.ndarray],
                 class_universe: list[int], params: dict, loss_trace: list[float]):
        self.weights = weights
        self.biases = biases
        self.class_universe = class_universe
        self.params = params
        self.loss_trace = loss_trace

    @property
    def feature_width(self) -> int:
        return int(self.weights[0].shape[0])

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.feature_width:
            raise TrainingError(f"predict expects width {self.feature_width}, got {X.shape}")
        probs, _, _ = forward(X, self.weights, self.biases)
        picks = probs.argmax(axis=1)  # first max -> smaller class value
        return np.asarray(self.class_universe, dtype=np.int64)[picks]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "class_universe": self.class_universe,
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
            "params": self.params,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "MLPModel":
        return cls(
            weights=[np.asarray(w, dtype=np.float64) for w in payload["weights"]],
            biases=[np.asarray(b, dtype=np.float64) for b in payload["biases"]],
            class_universe=list(payload["class_universe"]),
            params=dict(payload["params"]),
            loss_trace=[],
        )


def train_mlp(X, y, hidden: tuple[int, ...] = (16,), learning_rate: float = 0.01,
              epochs: int = 500, seed: int = 0) -> MLPModel:
    """Train by full-batch gradient descent on the cross-entropy loss."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise TrainingError("training set must be a non-empty 2-D matrix")
    if X.shape[0] != y.shape[0]:
        raise TrainingError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    if learning_rate <= 0 or epochs < 1 or any(h < 1 for h in hidden):
        raise TrainingError("require learning_rate > 0, epochs >= 1, hidden sizes >= 1")

    classes = np.unique(y).tolist()
    index_of = {c: i for i, c in enumerate(classes)}
    y_idx = np.array([index_of[int(c)] for c in y], dtype=np.int64)

    layer_sizes = [X.shape[1], *hidden, len(classes)]
    weights, biases = init_layers(layer_sizes, seed)

    loss_trace = []
    # divergence shows up as a non-finite loss, reported with its epoch; the
    # overflow warnings on the way there are expected noise
    with np.errstate(over="ignore", invalid="ignore"):
        for epoch in range(epochs):
            grad_w, grad_b, probs = gradients(X, y_idx, weights, biases)
            loss = cross_entropy(probs, y_idx)
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss at epoch {epoch}")
            loss_trace.append(loss)
            for l in range(len(weights)):
                weights[l] -= learning_rate * grad_w[l]
                biases[l] -= learning_rate * grad_b[l]

    return MLPModel(weights, biases, classes, {
        "hidden": list(hidden), "learning_rate": learning_rate, "epochs": epochs, "seed": seed,
    }, loss_trace)
