"""Independent brute-force oracles used to cross-check the library.

Everything here is deliberately written the slow, obvious way (direct
summations, exhaustive scans, textbook formulas) and never calls into the
code paths it verifies.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np


def direct_dft_magnitude(frame) -> np.ndarray:
    """O(W^2) one-sided DFT magnitude by direct summation."""
    frame = np.asarray(frame, dtype=np.float64)
    w = frame.shape[0]
    out = np.empty(w // 2 + 1)
    for b in range(w // 2 + 1):
        re = sum(frame[t] * math.cos(-2 * math.pi * b * t / w) for t in range(w))
        im = sum(frame[t] * math.sin(-2 * math.pi * b * t / w) for t in range(w))
        out[b] = math.hypot(re, im)
    return out


def direct_dft_two_sided_power(frame) -> float:
    """Sum of |X_b|^2 over all W two-sided DFT bins, by direct summation."""
    frame = np.asarray(frame, dtype=np.float64)
    w = frame.shape[0]
    total = 0.0
    for b in range(w):
        re = sum(frame[t] * math.cos(-2 * math.pi * b * t / w) for t in range(w))
        im = sum(frame[t] * math.sin(-2 * math.pi * b * t / w) for t in range(w))
        total += re * re + im * im
    return total


def brute_force_pitch(frame, fs, lo_hz=50.0, hi_hz=500.0, threshold=0.3) -> float:
    """Pitch from the normalized autocorrelation peak, plain double loop."""
    frame = np.asarray(frame, dtype=np.float64)
    w = frame.shape[0]
    r0 = sum(float(v) * float(v) for v in frame)
    if r0 <= 0:
        return 0.0
    lag_min = math.ceil(fs / hi_hz)
    lag_max = min(math.floor(fs / lo_hz), w - 1)
    best_lag, best_val = None, -math.inf
    for lag in range(lag_min, lag_max + 1):
        val = sum(float(frame[t]) * float(frame[t + lag]) for t in range(w - lag))
        if val > best_val:
            best_lag, best_val = lag, val
    if best_lag is None or best_val / r0 < threshold:
        return 0.0
    return fs / best_lag


def chroma_histogram(spectrum, fs, window_samples) -> np.ndarray:
    """Bin-by-bin pitch-class energy histogram (unnormalized)."""
    spectrum = np.asarray(spectrum, dtype=np.float64)
    out = np.zeros(12)
    for b, magnitude in enumerate(spectrum):
        freq = b * fs / window_samples
        if freq < 27.5:
            continue
        pitch_class = (round(12 * math.log2(freq / 440.0)) + 69) % 12
        out[pitch_class] += magnitude * magnitude
    return out


def anova_pvalue_textbook(column, y) -> float:
    """One-way ANOVA p-value from hand-computed sums of squares.

    The F survival probability is evaluated with mpmath's arbitrary-precision
    incomplete beta, independent of scipy.
    """
    column = np.asarray(column, dtype=np.float64)
    y = np.asarray(y)
    classes = sorted(set(y.tolist()))
    n = len(column)
    g = len(classes)
    grand = float(np.mean(column))
    ssb = 0.0
    ssw = 0.0
    for cls in classes:
        group = column[y == cls]
        mean_g = float(np.mean(group))
        ssb += len(group) * (mean_g - grand) ** 2
        ssw += float(np.sum((group - mean_g) ** 2))
    if ssb <= 0:
        return 1.0
    df1, df2 = g - 1, n - g
    if ssw <= 0:
        return 0.0
    f_stat = (ssb / df1) / (ssw / df2)
    x = df2 / (df2 + df1 * f_stat)
    # Regularized incomplete beta I_x(df2/2, df1/2) at 50 digits.
    with mpmath.workdps(50):
        p = mpmath.betainc(df2 / 2, df1 / 2, 0, x, regularized=True)
    return float(p)


def bh_keep_set_exhaustive(pvalues, q) -> set[int]:
    """Benjamini-Hochberg by exhaustive scan over every candidate rank r."""
    pvalues = list(map(float, pvalues))
    m = len(pvalues)
    ranked = sorted(range(m), key=lambda i: (pvalues[i], i))
    best_r = 0
    for r in range(1, m + 1):
        if pvalues[ranked[r - 1]] <= r * q / m:
            best_r = r
    return set(ranked[:best_r])


def full_correlation_matrix(X) -> np.ndarray:
    """Pairwise Pearson r with the zero-variance-means-zero convention."""
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    out = np.zeros((d, d))
    for i in range(d):
        for j in range(d):
            xi = X[:, i] - X[:, i].mean()
            xj = X[:, j] - X[:, j].mean()
            si = math.sqrt(float(np.mean(xi * xi)))
            sj = math.sqrt(float(np.mean(xj * xj)))
            if si == 0 or sj == 0:
                out[i, j] = 0.0
            else:
                out[i, j] = float(np.mean(xi * xj)) / (si * sj)
    return out


def least_squares_normal_equations(X, y_col) -> tuple[np.ndarray, float]:
    """Centered least squares solved by the normal equations.

    Returns (weights, intercept) for the model y ~ X w + b.
    """
    X = np.asarray(X, dtype=np.float64)
    y_col = np.asarray(y_col, dtype=np.float64)
    xc = X - X.mean(axis=0)
    yc = y_col - y_col.mean()
    w = np.linalg.solve(xc.T @ xc, xc.T @ yc)
    b = float(y_col.mean() - X.mean(axis=0) @ w)
    return w, b


def proximal_gradient_lasso(X, Y, alpha, iters=200000, tol=1e-14):
    """Multitask lasso by proximal gradient descent (ISTA) on centered data.

    Minimizes (1/(2n))||Yc - Xc W||_F^2 + alpha * sum_i ||W_i||_2 and returns
    (W, intercept, objective) with the intercept recovered analytically.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    n = X.shape[0]
    x_mean = X.mean(axis=0)
    y_mean = Y.mean(axis=0)
    xc = X - x_mean
    yc = Y - y_mean
    lipschitz = float(np.linalg.eigvalsh(xc.T @ xc / n).max())
    step = 1.0 / max(lipschitz, 1e-12)
    W = np.zeros((X.shape[1], Y.shape[1]))

    def objective(W):
        r = yc - xc @ W
        return float(np.sum(r * r) / (2 * n) + alpha * np.sum(np.sqrt(np.sum(W * W, axis=1))))

    prev = objective(W)
    for _ in range(iters):
        grad = xc.T @ (xc @ W - yc) / n
        Z = W - step * grad
        norms = np.sqrt(np.sum(Z * Z, axis=1))
        shrink = np.maximum(0.0, 1.0 - step * alpha / np.where(norms > 0, norms, 1.0))
        W = Z * shrink[:, None]
        cur = objective(W)
        if abs(prev - cur) < tol:
            prev = cur
            break
        prev = cur
    intercept = y_mean - x_mean @ W
    return W, intercept, prev


def rotation_from_euler(pitch, yaw, roll) -> np.ndarray:
    """Compose R = Rz(roll) @ Ry(yaw) @ Rx(pitch) from explicit axis rotations."""
    cx, sx = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    cz, sz = math.cos(roll), math.sin(roll)
    rx = np.array([[1, 0, 0], [0, cx, -sx], [0, sx, cx]])
    ry = np.array([[cy, 0, sy], [0, 1, 0], [-sy, 0, cy]])
    rz = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1]])
    return rz @ ry @ rx


def nearest_centroid_cv_accuracy(X, y, k=3, seed=0) -> float:
    """3-fold nearest-centroid accuracy with a simple round-robin split."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(y))
    folds = [order[f::k] for f in range(k)]
    correct = 0
    for f in range(k):
        test = folds[f]
        train = np.concatenate([folds[i] for i in range(k) if i != f])
        classes = sorted(set(y[train].tolist()))
        centroids = {c: X[train][y[train] == c].mean(axis=0) for c in classes}
        for idx in test:
            dists = {c: float(np.sum((X[idx] - mu) ** 2)) for c, mu in centroids.items()}
            pred = min(dists, key=lambda c: (dists[c], c))
            correct += int(pred == y[idx])
    return correct / len(y)


def finite_difference_gradients(loss_fn, params, eps=1e-5):
    """Central finite differences of a scalar loss over a list of arrays."""
    grads = []
    for arr in params:
        g = np.zeros_like(arr)
        flat = arr.reshape(-1)
        gf = g.reshape(-1)
        for i in range(flat.shape[0]):
            orig = flat[i]
            flat[i] = orig + eps
            hi = loss_fn()
            flat[i] = orig - eps
            lo = loss_fn()
            flat[i] = orig
            gf[i] = (hi - lo) / (2 * eps)
        grads.append(g)
    return grads
