"""Run configuration: one JSON document mirroring every pipeline default.

A config file may override any subset of keys; unknown keys are rejected so
typos fail loudly. The config hash (sha256 of the canonical JSON) keys the
feature cache and is recorded in run manifests.
"""

from __future__ import annotations

import copy
import hashlib
import json
from pathlib import Path
from typing import Any

from .errors import InterviewKitError
from .manifest import LABEL_NAMES

#: All seven non-empty modality combinations, in reporting order.
ALL_MASKS: tuple[tuple[str, ...], ...] = (
    ("audio", "video", "lexical"),
    ("audio", "video"),
    ("video", "lexical"),
    ("audio", "lexical"),
    ("audio",),
    ("video",),
    ("lexical",),
)

SELECTOR_NAMES = ("kbest", "bh", "fwe")

DEFAULTS: dict[str, Any] = {
    "seed": 0,
    "folds": 3,
    "frame": {"window_s": 0.050, "hop_s": 0.025},
    "audio": {"include_std": False},
    "visual": {"smile_prob_threshold": 0.5, "smile_ratio_threshold": 0.55},
    "lexical": {"tone_lexicon": None, "sentiment_lexicon": None, "filler_lexicon": None},
    "selection": {"correlation_threshold": 0.6, "k": 20, "fdr_q": 0.05, "fwe_alpha": 0.05},
    "models": {
        "rf": {"n_trees": 100, "criterion": "gini", "min_samples_leaf": 1, "max_depth": None},
        "svc": {"lam": 0.01, "epochs": 200, "eta0": 1.0},
        "lasso": {"alpha": 0.1, "tol": 1e-8, "max_sweeps": 1000},
        "mlp": {"hidden": [16], "learning_rate": 0.01, "epochs": 500},
    },
    "experiment": {
        "labels": list(LABEL_NAMES),
        "masks": [list(m) for m in ALL_MASKS],
        "selectors": list(SELECTOR_NAMES),
        "families": ["rf", "svc", "lasso", "mlp"],
    },
    "report": {"bands": {"needs-work": [1, 2], "adequate": [3, 5], "strong": [6, 7]}},
}


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise InterviewKitError(f"unknown config key: {where}")
        if isinstance(base[key], dict) and isinstance(value, dict):
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = copy.deepcopy(value)
    return out


class PipelineConfig:
    """Validated configuration with stable hashing."""

    def __init__(self, overrides: dict | None = None):
        self.data = _merge(DEFAULTS, overrides or {})
        self._validate()

    def _validate(self) -> None:
        exp = self.data["experiment"]
        unknown_labels = set(exp["labels"]) - set(LABEL_NAMES)
        if unknown_labels:
            raise InterviewKitError(f"unknown labels in config: {sorted(unknown_labels)}")
        unknown_selectors = set(exp["selectors"]) - set(SELECTOR_NAMES)
        if unknown_selectors:
            raise InterviewKitError(f"unknown selectors in config: {sorted(unknown_selectors)}")
        for mask in exp["masks"]:
            bad = set(mask) - {"audio", "video", "lexical"}
            if bad or not mask:
                raise InterviewKitError(f"invalid modality mask in config: {mask}")

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        if not path.is_file():
            raise InterviewKitError(f"config file not found: {path}")
        try:
            overrides = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InterviewKitError(f"config {path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(overrides, dict):
            raise InterviewKitError(f"config {path}: top level must be an object")
        return cls(overrides)

    def to_dict(self) -> dict:
        return copy.deepcopy(self.data)

    def __getitem__(self, key: str):
        return self.data[key]

    def config_hash(self) -> str:
        canonical = json.dumps(self.data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    # -- convenience accessors used across the pipeline ---------------------

    def frame_spec(self):
        from .audio import FrameSpec

        return FrameSpec(self.data["frame"]["window_s"], self.data["frame"]["hop_s"])

    def model_spec(self, family: str, seed: int | None = None):
        from .models import ModelSpec

        hp = dict(self.data["models"][family])
        if family == "mlp":
            hp["hidden"] = tuple(hp["hidden"])
        return ModelSpec(family, hp, seed=self.data["seed"] if seed is None else seed)
