"""Standardization, correlated-feature pruning, and univariate selection.

Standardization is the classic z-score z = (x - u) / s with u and s (population
standard deviation) computed on the training split only; zero-variance columns
are flagged and passed through centered. Univariate association uses a one-way
ANOVA F-test; the three selectors keep the k smallest p-values, the
Benjamini-Hochberg step-up set, or the Bonferroni family-wise set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc

from .core import FeatureMatrix
from .errors import FeatureError

CORRELATION_THRESHOLD = 0.6
_VARIANCE_FLOOR = 1e-30


def _as_array(X) -> np.ndarray:
    if isinstance(X, FeatureMatrix):
        return X.values
    return np.asarray(X, dtype=np.float64)


@dataclass(frozen=True)
class StandardizerState:
    """Fitted per-column mean/std; columns with s = 0 are flagged."""

    u: np.ndarray
    s: np.ndarray
    zero_variance: np.ndarray

    def to_dict(self) -> dict:
        return {
            "u": self.u.tolist(),
            "s": self.s.tolist(),
            "zero_variance": [bool(z) for z in self.zero_variance],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "StandardizerState":
        return cls(
            u=np.asarray(payload["u"], dtype=np.float64),
            s=np.asarray(payload["s"], dtype=np.float64),
            zero_variance=np.asarray(payload["zero_variance"], dtype=bool),
        )


def standardize_fit(X) -> StandardizerState:
    """Fit column means and population standard deviations (needs n >= 2)."""
    values = _as_array(X)
    if values.shape[0] < 2:
        raise FeatureError(f"standardization needs at least 2 rows, got {values.shape[0]}")
    u = values.mean(axis=0)
    s = values.std(axis=0)
    return StandardizerState(u=u, s=s, zero_variance=s == 0.0)


def standardize_apply(state: StandardizerState, X) -> np.ndarray:
    """Apply z = (x - u) / s; flagged zero-variance columns use divisor 1."""
    values = _as_array(X)
    if values.shape[-1] != state.u.shape[0]:
        raise FeatureError(f"column count {values.shape[-1]} does not match fitted width {state.u.shape[0]}")
    divisor = np.where(state.zero_variance, 1.0, state.s)
    return (values - state.u) / divisor


@dataclass(frozen=True)
class SelectorState:
    """A fitted column-selection step: which columns survive, and why."""

    method: str
    kept_columns: tuple[int, ...]
    params: dict = field(default_factory=dict)
    pvalues: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        kept = tuple(int(i) for i in self.kept_columns)
        object.__setattr__(self, "kept_columns", kept)
        if len(set(kept)) != len(kept):
            raise FeatureError("kept_columns must be unique")
        if self.pvalues is not None:
            pv = tuple(float(p) for p in self.pvalues)
            object.__setattr__(self, "pvalues", pv)
            if any(not (0.0 <= p <= 1.0) for p in pv):
                raise FeatureError("p-values must lie in [0, 1]")

    def apply(self, X) -> np.ndarray:
        values = _as_array(X)
        return values[..., list(self.kept_columns)]

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "kept_columns": list(self.kept_columns),
            "params": dict(self.params),
            "pvalues": None if self.pvalues is None else list(self.pvalues),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "SelectorState":
        return cls(
            method=payload["method"],
            kept_columns=tuple(payload["kept_columns"]),
            params=dict(payload.get("params", {})),
            pvalues=None if payload.get("pvalues") is None else tuple(payload["pvalues"]),
        )


def correlation_prune(X, threshold: float = CORRELATION_THRESHOLD) -> SelectorState:
    """Drop columns too correlated with an earlier kept column.

    Scans left to right and drops column j when |Pearson r| with any kept
    column i < j strictly exceeds the threshold. Zero-variance columns
    correlate 0 with everything by convention (so they are kept). Needs
    n >= 3 rows.
    """
    values = _as_array(X)
    n, d = values.shape
    if n < 3:
        raise FeatureError(f"correlation pruning needs at least 3 rows, got {n}")
    centered = values - values.mean(axis=0)
    stds = values.std(axis=0)
    scale = np.where(stds == 0.0, 1.0, stds)
    z = centered / scale
    z[:, stds == 0.0] = 0.0  # zero-variance convention: r = 0
    corr = (z.T @ z) / n

    kept: list[int] = []
    for j in range(d):
        if all(abs(corr[i, j]) <= threshold for i in kept):
            kept.append(j)
    return SelectorState("correlation_prune", tuple(kept), params={"threshold": threshold})


def f_test_pvalues(X, y) -> np.ndarray:
    """One-way ANOVA p-value per column for the class groups in y.

    p = 1 - F_cdf(F; g-1, n-g) computed through the regularized incomplete
    beta function. Columns with no between-group variance get p = 1; a
    vanishing within-group variance is floored so perfectly separating
    columns get p ~ 0.
    """
    values = _as_array(X)
    y = np.asarray(getattr(y, "classes", y))
    n, d = values.shape
    if y.shape[0] != n:
        raise FeatureError(f"label length {y.shape[0]} != row count {n}")
    classes = np.unique(y)
    g = classes.shape[0]
    if g < 2:
        raise FeatureError("ANOVA needs at least 2 distinct classes")
    if n - g < 1:
        raise FeatureError("ANOVA needs at least one within-class degree of freedom")

    grand = values.mean(axis=0)
    ssb = np.zeros(d)
    ssw = np.zeros(d)
    for cls in classes:
        group = values[y == cls]
        mean_g = group.mean(axis=0)
        ssb += group.shape[0] * (mean_g - grand) ** 2
        ssw += ((group - mean_g) ** 2).sum(axis=0)

    df1 = g - 1
    df2 = n - g
    msb = ssb / df1
    msw = np.maximum(ssw / df2, _VARIANCE_FLOOR)
    f_stat = msb / msw

    # Survival function of the F distribution via the incomplete beta
    # complement; exact at F = 0 (p = 1) and stable for huge F.
    x = df2 / (df2 + df1 * f_stat)
    pvalues = betainc(df2 / 2.0, df1 / 2.0, x)
    pvalues[ssb <= 0.0] = 1.0
    return np.clip(pvalues, 0.0, 1.0)


def select_k_best(pvalues, k: int) -> SelectorState:
    """Keep the k columns with the smallest p-values (ties: lower index)."""
    pvalues = np.asarray(pvalues, dtype=np.float64)
    m = pvalues.shape[0]
    if not (1 <= k <= m):
        raise FeatureError(f"k must be in [1, {m}], got {k}")
    order = np.argsort(pvalues, kind="stable")
    kept = tuple(sorted(int(i) for i in order[:k]))
    return SelectorState("k_best", kept, params={"k": k}, pvalues=tuple(pvalues))


def select_fdr_bh(pvalues, q: float) -> SelectorState:
    """Benjamini-Hochberg step-up at FDR level q.

    With p_(1) <= ... <= p_(m), find the largest r with p_(r) <= r*q/m and
    keep the columns of the r smallest p-values; keep none if no rank passes.
    """
    if not (0.0 < q <= 1.0):
        raise FeatureError(f"Q must be in (0, 1], got {q}")
    pvalues = np.asarray(pvalues, dtype=np.float64)
    m = pvalues.shape[0]
    order = np.argsort(pvalues, kind="stable")
    ranked = pvalues[order]
    passing = ranked <= (np.arange(1, m + 1) * q / m)
    if not passing.any():
        kept: tuple[int, ...] = ()
    else:
        r = int(np.flatnonzero(passing)[-1]) + 1
        kept = tuple(sorted(int(i) for i in order[:r]))
    return SelectorState("fdr_bh", kept, params={"Q": q}, pvalues=tuple(pvalues))


def select_fwe(pvalues, alpha: float) -> SelectorState:
    """Bonferroni family-wise selection: keep columns with p <= alpha/m."""
    if not (0.0 < alpha <= 1.0):
        raise FeatureError(f"alpha must be in (0, 1], got {alpha}")
    pvalues = np.asarray(pvalues, dtype=np.float64)
    cutoff = alpha / pvalues.shape[0]
    kept = tuple(int(i) for i in np.flatnonzero(pvalues <= cutoff))
    return SelectorState("fwe", kept, params={"alpha": alpha}, pvalues=tuple(pvalues))
