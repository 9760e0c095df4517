"""Self-contained trained-model bundles: one JSON file per label.

A bundle carries everything standalone prediction needs: the model family and
hyperparameters, the fitted parameters, the class universe, the fitted
standardizer and both selection steps, the fused column names, and the
extraction settings (mask, frame spec, thresholds) the features were built
with.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import PipelineConfig
from .core import FeatureMatrix, fuse_features
from .errors import InterviewKitError
from .experiment import fit_selector
from .extract import ExtractedFeatures
from .models import ConstantModel, ModelSpec, majority_class, model_from_dict, train_model
from .preprocess import (
    SelectorState,
    StandardizerState,
    correlation_prune,
    f_test_pvalues,
    standardize_apply,
    standardize_fit,
)


@dataclass
class ModelBundle:
    """A trained per-label pipeline: standardize -> prune -> select -> model."""

    label_name: str
    mask: tuple[str, ...]
    spec: ModelSpec
    standardizer: StandardizerState
    pruner: SelectorState
    selector: SelectorState
    model: object
    column_names: tuple[str, ...]
    extraction: dict

    @property
    def feature_width(self) -> int:
        return len(self.column_names)

    def final_columns(self) -> tuple[int, ...]:
        """Selected column indices into the fused (pre-selection) matrix."""
        return tuple(self.pruner.kept_columns[j] for j in self.selector.kept_columns)

    def selected_feature_names(self) -> tuple[str, ...]:
        return tuple(self.column_names[i] for i in self.final_columns())

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.feature_width:
            raise InterviewKitError(
                f"feature width mismatch: bundle expects {self.feature_width}, got {X.shape[-1]}"
            )
        z = standardize_apply(self.standardizer, X)
        return z[..., list(self.final_columns())]

    def predict(self, X: np.ndarray) -> np.ndarray:
        if isinstance(self.model, ConstantModel):
            X = np.asarray(X, dtype=np.float64)
            if X.shape[-1] != self.feature_width:
                raise InterviewKitError(
                    f"feature width mismatch: bundle expects {self.feature_width}, got {X.shape[-1]}"
                )
            return self.model.predict(X)
        return self.model.predict(self.transform(X))

    def save(self, path: str | Path) -> None:
        payload = {
            "label": self.label_name,
            "mask": list(self.mask),
            "spec": self.spec.to_dict(),
            "standardizer": self.standardizer.to_dict(),
            "pruner": self.pruner.to_dict(),
            "selector": self.selector.to_dict(),
            "model": self.model.to_dict(),
            "column_names": list(self.column_names),
            "extraction": self.extraction,
        }
        Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ModelBundle":
        path = Path(path)
        if not path.is_file():
            raise InterviewKitError(f"model bundle not found: {path}")
        payload = json.loads(path.read_text(encoding="utf-8"))
        return cls(
            label_name=payload["label"],
            mask=tuple(payload["mask"]),
            spec=ModelSpec.from_dict(payload["spec"]),
            standardizer=StandardizerState.from_dict(payload["standardizer"]),
            pruner=SelectorState.from_dict(payload["pruner"]),
            selector=SelectorState.from_dict(payload["selector"]),
            model=model_from_dict(payload["model"]),
            column_names=tuple(payload["column_names"]),
            extraction=dict(payload["extraction"]),
        )


def train_bundle(features: ExtractedFeatures, label_name: str, config: PipelineConfig,
                 mask: tuple[str, ...] | None = None, selector_name: str = "fwe",
                 family: str = "rf") -> ModelBundle:
    """Fit the full pipeline for one label on all provided records."""
    if features.labels is None:
        raise InterviewKitError("training a bundle needs labeled records")
    if mask is None:
        mask = ("audio", "video", "lexical")
    fused = fuse_features([features.parts[m] for m in mask], mask)
    y = features.labels[label_name]

    standardizer = standardize_fit(fused.values)
    z = standardize_apply(standardizer, fused.values)
    pruner = correlation_prune(z, config["selection"]["correlation_threshold"])
    z_pruned = pruner.apply(z)
    pvalues = f_test_pvalues(z_pruned, y)
    selector = fit_selector(selector_name, pvalues, config["selection"])

    spec = config.model_spec(family)
    if selector.kept_columns:
        model = train_model(z_pruned[:, list(selector.kept_columns)], y, spec)
    else:
        model = ConstantModel(majority_class(y), feature_width=0)

    extraction = {
        "frame": dict(config["frame"]),
        "audio": dict(config["audio"]),
        "visual": dict(config["visual"]),
        "lexical": dict(config["lexical"]),
    }
    return ModelBundle(
        label_name=label_name,
        mask=tuple(mask),
        spec=spec,
        standardizer=standardizer,
        pruner=pruner,
        selector=selector,
        model=model,
        column_names=fused.column_names,
        extraction=extraction,
    )


def fused_row_for_bundle(features: ExtractedFeatures, bundle: ModelBundle) -> FeatureMatrix:
    """Fuse extracted parts with the bundle's stored modality mask."""
    return fuse_features([features.parts[m] for m in bundle.mask], bundle.mask)
