"""The experiment matrix: labels x modality masks x selectors x model families.

Every cell runs 3-fold (configurable) cross-validation with the full
preprocessing chain fit on the training fold only: standardize, prune
correlated columns at the 0.6 threshold, select by ANOVA p-values, train,
then score accuracy on the held-out fold. Results render into the four
report tables (best per model family, modality pairs and singles under the
random forest, and selector comparison) plus a machine-readable run manifest.

Runs are deterministic for a fixed (dataset, config): cells are enumerated in
config order, fold plans depend only on (y, k, seed), and output files are
written with stable formatting, so re-running produces byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import PipelineConfig
from .core import FeatureMatrix, fuse_features
from .errors import CacheError, FeatureError
from .evaluation import accuracy, iter_folds, stratified_kfold
from .extract import ExtractedFeatures
from .models import ConstantModel, ModelSpec, majority_class, train_model
from .preprocess import (
    correlation_prune,
    f_test_pvalues,
    select_fdr_bh,
    select_fwe,
    select_k_best,
    standardize_apply,
    standardize_fit,
)

FAMILY_TITLES = {"rf": "Random Forest", "svc": "SVC", "lasso": "Multitask Lasso", "mlp": "MLP"}
SELECTOR_TITLES = {"bh": "Benjamini-Hochberg", "fwe": "Family-wise error selection",
                   "kbest": "K best feature selection"}

TABLE_FILENAMES = {
    "table1": "table1_best_by_model.csv",
    "table2": "table2_modality_pairs_rf.csv",
    "table3": "table3_single_modalities_rf.csv",
    "table4": "table4_selectors.csv",
}


@dataclass(frozen=True)
class ExperimentResult:
    """Cross-validated accuracy for one (label, mask, selector, family) cell."""

    label_name: str
    modality_mask: tuple[str, ...]
    selector_method: str
    model_family: str
    fold_accuracies: tuple[float, ...]
    selected_feature_names: tuple[str, ...]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracies))

    def key(self) -> tuple:
        return (self.label_name, self.modality_mask, self.selector_method, self.model_family)

    def to_dict(self) -> dict:
        return {
            "label": self.label_name,
            "mask": list(self.modality_mask),
            "selector": self.selector_method,
            "family": self.model_family,
            "fold_accuracies": list(self.fold_accuracies),
            "mean_accuracy": self.mean_accuracy,
            "selected_feature_names": list(self.selected_feature_names),
        }


def fit_selector(name: str, pvalues: np.ndarray, selection_cfg: dict):
    """Build the configured selector state from p-values.

    k for k-best is clamped to the available width (pruning can leave fewer
    than the configured k columns).
    """
    if name == "kbest":
        k = min(int(selection_cfg["k"]), pvalues.shape[0])
        return select_k_best(pvalues, k)
    if name == "bh":
        return select_fdr_bh(pvalues, selection_cfg["fdr_q"])
    if name == "fwe":
        return select_fwe(pvalues, selection_cfg["fwe_alpha"])
    raise FeatureError(f"unknown selector {name!r}")


def run_cell_fold(X_train, y_train, X_test, selector_name: str, spec: ModelSpec, selection_cfg: dict):
    """One fold of one cell: fit preprocessing on train only, then predict.

    Returns (predictions, selected column indices into the fused matrix).
    """
    standardizer = standardize_fit(X_train)
    z_train = standardize_apply(standardizer, X_train)
    z_test = standardize_apply(standardizer, X_test)

    pruner = correlation_prune(z_train, selection_cfg["correlation_threshold"])
    z_train = pruner.apply(z_train)
    z_test = pruner.apply(z_test)

    pvalues = f_test_pvalues(z_train, y_train)
    selector = fit_selector(selector_name, pvalues, selection_cfg)
    kept = [pruner.kept_columns[j] for j in selector.kept_columns]
    if not selector.kept_columns:
        model = ConstantModel(majority_class(y_train))
        return model.predict(X_test), kept
    model = train_model(selector.apply(z_train), y_train, spec)
    return model.predict(selector.apply(z_test)), kept


def run_experiment_matrix(features: ExtractedFeatures, config: PipelineConfig | None = None) -> list[ExperimentResult]:
    """Evaluate every configured cell; raises CacheError when parts are missing."""
    if config is None:
        config = PipelineConfig()
    if features.labels is None:
        raise CacheError("experiment matrix needs labeled records")
    exp = config["experiment"]
    selection_cfg = config["selection"]
    seed = config["seed"]
    folds = config["folds"]

    needed = {m for mask in exp["masks"] for m in mask}
    missing = needed - set(features.parts)
    if missing:
        raise CacheError(f"missing cached features for modalities: {sorted(missing)}")

    fused: dict[tuple[str, ...], FeatureMatrix] = {}
    for mask in exp["masks"]:
        key = tuple(mask)
        fused[key] = fuse_features([features.parts[m] for m in key], key)

    results: list[ExperimentResult] = []
    for label in exp["labels"]:
        y = features.labels[label]
        plan = stratified_kfold(y, k=folds, seed=seed)
        splits = list(iter_folds(plan))
        for mask in exp["masks"]:
            key = tuple(mask)
            X = fused[key].values
            names = fused[key].column_names
            for selector_name in exp["selectors"]:
                for family in exp["families"]:
                    spec = config.model_spec(family)
                    fold_accs = []
                    selected: set[int] = set()
                    for train_idx, test_idx in splits:
                        pred, kept = run_cell_fold(
                            X[train_idx], y[train_idx], X[test_idx],
                            selector_name, spec, selection_cfg,
                        )
                        fold_accs.append(accuracy(pred, y[test_idx]))
                        selected.update(kept)
                    results.append(
                        ExperimentResult(
                            label_name=label,
                            modality_mask=key,
                            selector_method=selector_name,
                            model_family=family,
                            fold_accuracies=tuple(fold_accs),
                            selected_feature_names=tuple(names[i] for i in sorted(selected)),
                        )
                    )
    return results


# -- tables -------------------------------------------------------------------


def _best_mean(results: list[ExperimentResult], **criteria) -> float | None:
    """Best mean accuracy over all results matching the given fields."""
    best = None
    for r in results:
        match = all(
            getattr(r, field) == value
            for field, value in criteria.items()
        )
        if match:
            if best is None or r.mean_accuracy > best:
                best = r.mean_accuracy
    return best


def render_table1(results: list[ExperimentResult], config: PipelineConfig) -> list[list[str]] | None:
    """Best accuracy per model family on the full three-modality vector."""
    full = ("audio", "video", "lexical")
    families = config["experiment"]["families"]
    labels = config["experiment"]["labels"]
    rows = [["Label"] + [FAMILY_TITLES[f] for f in families]]
    for label in labels:
        row = [label]
        for family in families:
            best = _best_mean(results, label_name=label, modality_mask=full, model_family=family)
            if best is None:
                return None
            row.append(f"{best:.4f}")
        rows.append(row)
    return rows


def render_table2(results: list[ExperimentResult], config: PipelineConfig) -> list[list[str]] | None:
    """Random-forest accuracy for the full vector and the three pairs."""
    masks = [("audio", "video", "lexical"), ("audio", "video"), ("video", "lexical"), ("audio", "lexical")]
    titles = ["Audio+Video+Lexical", "Audio+Video", "Lexical+Video", "Audio+Lexical"]
    return _mask_table(results, config, masks, titles, family="rf")


def render_table3(results: list[ExperimentResult], config: PipelineConfig) -> list[list[str]] | None:
    """Random-forest accuracy for each single modality."""
    masks = [("audio",), ("video",), ("lexical",)]
    titles = ["Audio", "Video", "Lexical"]
    return _mask_table(results, config, masks, titles, family="rf")


def _mask_table(results, config, masks, titles, family) -> list[list[str]] | None:
    labels = config["experiment"]["labels"]
    rows = [["Label"] + titles]
    for label in labels:
        row = [label]
        for mask in masks:
            best = _best_mean(results, label_name=label, modality_mask=mask, model_family=family)
            if best is None:
                return None
            row.append(f"{best:.4f}")
        rows.append(row)
    return rows


def render_table4(results: list[ExperimentResult], config: PipelineConfig) -> list[list[str]] | None:
    """Best accuracy per selection technique on the full vector (any family)."""
    full = ("audio", "video", "lexical")
    selectors = ["bh", "fwe", "kbest"]
    labels = config["experiment"]["labels"]
    rows = [["Label"] + [SELECTOR_TITLES[s] for s in selectors]]
    for label in labels:
        row = [label]
        for selector in selectors:
            best = _best_mean(results, label_name=label, modality_mask=full, selector_method=selector)
            if best is None:
                return None
            row.append(f"{best:.4f}")
        rows.append(row)
    return rows


def write_results(results: list[ExperimentResult], out_dir: str | Path, config: PipelineConfig) -> list[str]:
    """Write available table CSVs plus the run manifest; returns file names."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    renderers = {
        "table1": render_table1,
        "table2": render_table2,
        "table3": render_table3,
        "table4": render_table4,
    }
    for key, renderer in renderers.items():
        rows = renderer(results, config)
        if rows is None:
            continue  # config did not produce the cells this table needs
        path = out_dir / TABLE_FILENAMES[key]
        with path.open("w", newline="", encoding="utf-8") as fh:
            csv.writer(fh, lineterminator="\n").writerows(rows)
        written.append(path.name)

    manifest = {
        "config_hash": config.config_hash(),
        "seed": config["seed"],
        "folds": config["folds"],
        "results": [r.to_dict() for r in sorted(results, key=lambda r: r.key())],
    }
    manifest_path = out_dir / "run_manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    written.append(manifest_path.name)
    return written
