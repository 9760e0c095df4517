"""Multitask Lasso trained by block coordinate descent.

Minimizes (1/(2n)) * ||Y - XW - 1 b'||_F^2 + alpha * sum_i ||W[i, :]||_2 over
the d-by-c weight matrix W, where the row-wise l2,1 penalty zeroes entire
feature rows across all one-hot class columns at once. Each sweep applies the
closed-form group soft-threshold update per feature row

    g_i = x_i' R_i               (R_i: residual with row i's contribution added back)
    W[i] = max(0, 1 - alpha*n/||g_i||_2) * g_i / ||x_i||^2

then refits the unpenalized intercept as the residual column means. Both
steps minimize the objective exactly over their block, so the per-sweep
objective trace is non-increasing. Classification uses one-hot targets and
argmax scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TrainingError


@dataclass
class MultitaskLassoFit:
    """Fitted parameters plus the per-sweep objective trace."""

    W: np.ndarray  # (d, c)
    intercept: np.ndarray  # (c,)
    alpha: float
    objective_trace: list[float]
    n_sweeps: int


def lasso_objective(X: np.ndarray, Y: np.ndarray, W: np.ndarray, intercept: np.ndarray, alpha: float) -> float:
    residual = Y - X @ W - intercept
    n = X.shape[0]
    return float(np.sum(residual * residual) / (2.0 * n) + alpha * np.sqrt((W * W).sum(axis=1)).sum())


def one_hot(y: np.ndarray, class_universe: list[int]) -> np.ndarray:
    index_of = {c: i for i, c in enumerate(class_universe)}
    out = np.zeros((y.shape[0], len(class_universe)))
    for row, cls in enumerate(y):
        out[row, index_of[int(cls)]] = 1.0
    return out


def validate_one_hot(Y: np.ndarray) -> None:
    """Require every row of Y to be exactly one-hot over its columns."""
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2:
        raise TrainingError("one-hot targets must be 2-D")
    if not np.all((Y == 0.0) | (Y == 1.0)) or not np.all(Y.sum(axis=1) == 1.0):
        raise TrainingError("targets are not one-hot: rows must contain a single 1")


def fit_multitask_lasso(X, Y, alpha: float, tol: float = 1e-8, max_sweeps: int = 1000) -> MultitaskLassoFit:
    """Block coordinate descent on one-hot (or generic) multi-output targets.

    Y must be n-by-c with one-hot rows when used for classification (any
    finite matrix is accepted for regression-style use via c = 1 targets).
    Stops when the largest row change in a sweep falls below tol.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if X.ndim != 2 or Y.ndim != 2 or X.shape[0] != Y.shape[0]:
        raise TrainingError(f"incompatible shapes X{X.shape}, Y{Y.shape}")
    if alpha < 0:
        raise TrainingError(f"alpha must be >= 0, got {alpha}")

    n, d = X.shape
    c = Y.shape[1]
    W = np.zeros((d, c))
    intercept = Y.mean(axis=0)
    residual = Y - intercept  # X @ W is zero at the start
    col_sq = (X * X).sum(axis=0)  # ||x_i||^2 per feature column

    trace = [lasso_objective(X, Y, W, intercept, alpha)]
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        max_change = 0.0
        for i in range(d):
            if col_sq[i] == 0.0:
                continue  # constant-zero column (e.g. flagged at standardization)
            old = W[i].copy()
            if np.any(old):
                residual += np.outer(X[:, i], old)
            g = X[:, i] @ residual
            norm_g = float(np.sqrt(g @ g))
            shrink = max(0.0, 1.0 - alpha * n / norm_g) if norm_g > 0.0 else 0.0
            new = (shrink / col_sq[i]) * g
            if np.any(new):
                residual -= np.outer(X[:, i], new)
            W[i] = new
            max_change = max(max_change, float(np.max(np.abs(new - old))))
        shift = residual.mean(axis=0)
        intercept += shift
        residual -= shift
        trace.append(lasso_objective(X, Y, W, intercept, alpha))
        if max_change < tol:
            break

    return MultitaskLassoFit(W=W, intercept=intercept, alpha=alpha,
                             objective_trace=trace, n_sweeps=sweeps)


class MultitaskLassoModel:
    family = "lasso"

    def __init__(self, fit: MultitaskLassoFit, class_universe: list[int], params: dict):
        self.fit = fit
        self.class_universe = class_universe
        self.params = params

    @property
    def feature_width(self) -> int:
        return int(self.fit.W.shape[0])

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.feature_width:
            raise TrainingError(f"predict expects width {self.feature_width}, got {X.shape}")
        scores = X @ self.fit.W + self.fit.intercept
        picks = scores.argmax(axis=1)  # first max -> smaller class value
        return np.asarray(self.class_universe, dtype=np.int64)[picks]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "class_universe": self.class_universe,
            "W": self.fit.W.tolist(),
            "intercept": self.fit.intercept.tolist(),
            "alpha": self.fit.alpha,
            "params": self.params,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "MultitaskLassoModel":
        fit = MultitaskLassoFit(
            W=np.asarray(payload["W"], dtype=np.float64),
            intercept=np.asarray(payload["intercept"], dtype=np.float64),
            alpha=float(payload["alpha"]),
            objective_trace=[],
            n_sweeps=0,
        )
        return cls(fit, list(payload["class_universe"]), dict(payload["params"]))


def train_multitask_lasso_onehot(X, Y_onehot, class_universe: list[int], alpha: float = 0.1,
                                 tol: float = 1e-8, max_sweeps: int = 1000) -> MultitaskLassoModel:
    """Fit on explicit one-hot targets (validated) over the given classes."""
    Y_onehot = np.asarray(Y_onehot, dtype=np.float64)
    validate_one_hot(Y_onehot)
    if Y_onehot.shape[1] != len(class_universe):
        raise TrainingError(f"one-hot width {Y_onehot.shape[1]} != {len(class_universe)} classes")
    fit = fit_multitask_lasso(X, Y_onehot, alpha=alpha, tol=tol, max_sweeps=max_sweeps)
    return MultitaskLassoModel(fit, list(class_universe), {
        "alpha": alpha, "tol": tol, "max_sweeps": max_sweeps,
    })


def train_multitask_lasso(X, y, alpha: float = 0.1, tol: float = 1e-8,
                          max_sweeps: int = 1000, seed: int = 0) -> MultitaskLassoModel:
    """Classification wrapper: one-hot encode y, fit, predict by argmax.

    The seed is accepted for interface uniformity; coordinate descent itself
    is deterministic.
    """
    y = np.asarray(y, dtype=np.int64)
    classes = np.unique(y).tolist()
    model = train_multitask_lasso_onehot(X, one_hot(y, classes), classes,
                                         alpha=alpha, tol=tol, max_sweeps=max_sweeps)
    model.params["seed"] = seed
    return model
