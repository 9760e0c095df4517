"""Four classifier families with a uniform train/predict contract.

Training is a pure function of (X, y, spec): all randomness flows from the
spec's seed, so identical inputs produce bit-identical models. Predictions
always lie in the model's class_universe (the sorted classes observed at
training time) and every argmax tie resolves to the smaller class value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import TrainingError
from .forest import RandomForestModel, train_random_forest, gini_impurity, entropy_bits
from .svc import LinearSVCModel, train_linear_svc, hinge_objective
from .lasso import (
    MultitaskLassoFit,
    MultitaskLassoModel,
    fit_multitask_lasso,
    lasso_objective,
    one_hot,
    train_multitask_lasso,
    train_multitask_lasso_onehot,
    validate_one_hot,
)
from .mlp import MLPModel, train_mlp

FAMILIES = ("rf", "svc", "lasso", "mlp")

DEFAULT_HYPERPARAMS: dict[str, dict] = {
    "rf": {"n_trees": 100, "criterion": "gini", "min_samples_leaf": 1, "max_depth": None},
    "svc": {"lam": 0.01, "epochs": 200, "eta0": 1.0},
    "lasso": {"alpha": 0.1, "tol": 1e-8, "max_sweeps": 1000},
    "mlp": {"hidden": (16,), "learning_rate": 0.01, "epochs": 500},
}

#: Exhaustive search grids used when no grid is supplied explicitly.
DEFAULT_GRIDS: dict[str, dict[str, list]] = {
    "rf": {"n_trees": [50, 100, 200], "criterion": ["gini", "info_gain", "gain_ratio"]},
    "svc": {"lam": [1e-3, 1e-2, 1e-1], "epochs": [200]},
    "lasso": {"alpha": [0.01, 0.05, 0.1, 0.5]},
    "mlp": {"hidden": [(16,), (64,)], "learning_rate": [0.01, 0.001], "epochs": [500]},
}


@dataclass(frozen=True)
class ModelSpec:
    """A model family, its hyperparameters, and the training seed."""

    family: str
    hyperparams: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise TrainingError(f"unknown model family {self.family!r}; expected one of {FAMILIES}")
        merged = dict(DEFAULT_HYPERPARAMS[self.family])
        merged.update(self.hyperparams)
        if self.family == "mlp":
            merged["hidden"] = tuple(merged["hidden"])
        object.__setattr__(self, "hyperparams", merged)

    def to_dict(self) -> dict:
        params = {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.hyperparams.items()}
        return {"family": self.family, "hyperparams": params, "seed": self.seed}

    @classmethod
    def from_dict(cls, payload: dict) -> "ModelSpec":
        return cls(payload["family"], dict(payload.get("hyperparams", {})), int(payload.get("seed", 0)))


class ConstantModel:
    """Degenerate predictor used when selection leaves no features.

    Predicts the majority training class (ties to the smaller value).
    """

    family = "constant"

    def __init__(self, constant_class: int, feature_width: int = 0):
        self.constant_class = int(constant_class)
        self.class_universe = [self.constant_class]
        self.feature_width = feature_width

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return np.full(X.shape[0], self.constant_class, dtype=np.int64)

    def to_dict(self) -> dict:
        return {"family": self.family, "constant_class": self.constant_class,
                "feature_width": self.feature_width}

    @classmethod
    def from_dict(cls, payload: dict) -> "ConstantModel":
        return cls(payload["constant_class"], payload.get("feature_width", 0))


def majority_class(y) -> int:
    values, counts = np.unique(np.asarray(y, dtype=np.int64), return_counts=True)
    return int(values[np.argmax(counts)])  # first max -> smaller class


def train_model(X, y, spec: ModelSpec):
    """Dispatch to the family trainer named by the spec."""
    hp = spec.hyperparams
    if spec.family == "rf":
        return train_random_forest(X, y, n_trees=hp["n_trees"], criterion=hp["criterion"],
                                   min_samples_leaf=hp["min_samples_leaf"],
                                   max_depth=hp["max_depth"], seed=spec.seed)
    if spec.family == "svc":
        return train_linear_svc(X, y, lam=hp["lam"], epochs=hp["epochs"], eta0=hp["eta0"],
                                seed=spec.seed)
    if spec.family == "lasso":
        return train_multitask_lasso(X, y, alpha=hp["alpha"], tol=hp["tol"],
                                     max_sweeps=hp["max_sweeps"], seed=spec.seed)
    if spec.family == "mlp":
        return train_mlp(X, y, hidden=hp["hidden"], learning_rate=hp["learning_rate"],
                         epochs=hp["epochs"], seed=spec.seed)
    raise TrainingError(f"unknown model family {spec.family!r}")


_MODEL_CLASSES = {
    "rf": RandomForestModel,
    "svc": LinearSVCModel,
    "lasso": MultitaskLassoModel,
    "mlp": MLPModel,
    "constant": ConstantModel,
}


def model_from_dict(payload: dict):
    family = payload.get("family")
    if family not in _MODEL_CLASSES:
        raise TrainingError(f"cannot deserialize model family {family!r}")
    return _MODEL_CLASSES[family].from_dict(payload)


from .search import grid_search  # noqa: E402  (re-export; depends on ModelSpec)

__all__ = [
    "FAMILIES",
    "DEFAULT_HYPERPARAMS",
    "DEFAULT_GRIDS",
    "ModelSpec",
    "ConstantModel",
    "majority_class",
    "train_model",
    "model_from_dict",
    "grid_search",
    "RandomForestModel",
    "train_random_forest",
    "gini_impurity",
    "entropy_bits",
    "LinearSVCModel",
    "train_linear_svc",
    "hinge_objective",
    "MultitaskLassoFit",
    "MultitaskLassoModel",
    "fit_multitask_lasso",
    "lasso_objective",
    "one_hot",
    "train_multitask_lasso",
    "train_multitask_lasso_onehot",
    "validate_one_hot",
    "MLPModel",
    "train_mlp",
]
