"""RBF-kernel support vector machine trained by sequential minimal optimization.

Decision function: f(x) = sum_i alpha_i y_i K(x_i, x) + b with labels in
{-1, +1}. The optimizer sweeps the training set, repairing pairs that
violate the KKT conditions by more than tol; it converges when no violators
remain and gives up (returning best-so-far with converged=False) after
max_passes consecutive sweeps that repaired nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateData, DimensionMismatch
from ..feature_table import ASD, CONTROL, ScalingStats
from .common import Prediction, SvmConfig

# Hard cap on optimizer sweeps, independent of the fruitless-sweep budget.
MAX_SWEEPS = 300


def rbf_kernel(a, b, gamma: float) -> float:
    """exp(-gamma * ||a - b||^2)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"vectors differ in length: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.exp(-gamma * (diff @ diff)))


def rbf_kernel_matrix(a, b, gamma: float) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    sq = (a * a).sum(axis=1)[:, None] + (b * b).sum(axis=1)[None, :] - 2.0 * (a @ b.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def smo_fit(kernel, labels, c: float, tol: float, max_passes: int,
            seed: int):
    """Solve the dual on a precomputed kernel matrix.

    Returns (alpha, b, converged). At convergence every point satisfies the
    KKT conditions within tol and sum(alpha*y) = 0.
    """
    k = np.asarray(kernel, dtype=float)
    y = np.asarray(labels, dtype=float)
    n = len(y)
    if not ((y > 0).any() and (y < 0).any()):
        raise DegenerateData("labels must contain both signs")

    rng = np.random.default_rng(seed)
    alpha = np.zeros(n)
    b = 0.0
    # g[i] = sum_j alpha_j y_j K(x_j, x_i), maintained incrementally.
    g = np.zeros(n)
    fruitless = 0
    converged = False

    for _ in range(MAX_SWEEPS):
        err = g + b - y
        r = y * err
        violators = np.nonzero(((r < -tol) & (alpha < c)) |
                               ((r > tol) & (alpha > 0)))[0]
        if violators.size == 0:
            converged = True
            break
        changed = 0
        for i in violators:
            e_i = g[i] + b - y[i]
            r_i = y[i] * e_i
            if not ((r_i < -tol and alpha[i] < c) or (r_i > tol and alpha[i] > 0)):
                continue  # repaired by an earlier update this sweep
            j = int(rng.integers(n - 1))
            if j >= i:
                j += 1
            e_j = g[j] + b - y[j]
            ai_old, aj_old = alpha[i], alpha[j]
            if y[i] != y[j]:
                lo = max(0.0, aj_old - ai_old)
                hi = min(c, c + aj_old - ai_old)
            else:
                lo = max(0.0, ai_old + aj_old - c)
                hi = min(c, ai_old + aj_old)
            if lo >= hi:
                continue
            eta = 2.0 * k[i, j] - k[i, i] - k[j, j]
            if eta < 0:
                aj = aj_old - y[j] * (e_i - e_j) / eta
                aj = min(max(aj, lo), hi)
            else:
                # Flat direction: the dual objective is linear along the
                # constraint line with slope y_j (E_i - E_j) in alpha_j.
                slope = y[j] * (e_i - e_j)
                if slope > 0:
                    aj = hi
                elif slope < 0:
                    aj = lo
                else:
                    continue
            if abs(aj - aj_old) < 1e-10:
                continue
            ai = ai_old + y[i] * y[j] * (aj_old - aj)
            alpha[i], alpha[j] = ai, aj
            g += y[i] * (ai - ai_old) * k[:, i] + y[j] * (aj - aj_old) * k[:, j]
            b1 = b - e_i - y[i] * (ai - ai_old) * k[i, i] \
                - y[j] * (aj - aj_old) * k[i, j]
            b2 = b - e_j - y[i] * (ai - ai_old) * k[i, j] \
                - y[j] * (aj - aj_old) * k[j, j]
            if 0 < ai < c:
                b = b1
            elif 0 < aj < c:
                b = b2
            else:
                b = 0.5 * (b1 + b2)
            changed += 1
        if changed == 0:
            fruitless += 1
            if fruitless >= max_passes:
                break
        else:
            fruitless = 0
    return alpha, float(b), converged


@dataclass(eq=False)
class SvmModel:
    support_vectors: np.ndarray
    support_labels: np.ndarray  # in {-1, +1}
    multipliers: np.ndarray
    bias: float
    gamma: float
    scaler: ScalingStats
    feature_names: tuple[str, ...]
    converged: bool = True


def resolve_gamma(gamma, x) -> float:
    """'scale' maps to 1 / (d * Var(x)) over the (scaled) training matrix."""
    if gamma == "scale":
        var = float(np.asarray(x).var())
        if var <= 0:
            var = 1.0
        return 1.0 / (x.shape[1] * var)
    return float(gamma)


def fit(config: SvmConfig, x, y, feature_names) -> SvmModel:
    x = np.asarray(x, dtype=float)
    scaler = ScalingStats.from_matrix(x)
    xs = scaler.apply(x)
    gamma = resolve_gamma(config.gamma, xs)
    signed = np.where(np.asarray(y, dtype=int) == ASD, 1.0, -1.0)
    kernel = rbf_kernel_matrix(xs, xs, gamma)
    alpha, b, converged = smo_fit(kernel, signed, config.c, config.tol,
                                  config.max_passes, config.seed)
    keep = alpha > 0
    return SvmModel(
        support_vectors=xs[keep],
        support_labels=signed[keep],
        multipliers=alpha[keep],
        bias=b,
        gamma=gamma,
        scaler=scaler,
        feature_names=tuple(feature_names),
        converged=converged,
    )


def decision_value(model: SvmModel, scaled_x) -> float:
    diff = model.support_vectors - scaled_x
    kvals = np.exp(-model.gamma * (diff * diff).sum(axis=1))
    return float((model.multipliers * model.support_labels * kvals).sum()
                 + model.bias)


def predict(model: SvmModel, x) -> Prediction:
    x = np.asarray(x, dtype=float)
    if x.shape != (len(model.feature_names),):
        raise DimensionMismatch(
            f"expected {len(model.feature_names)} features, got {x.shape}")
    score = decision_value(model, model.scaler.apply(x[None, :])[0])
    return Prediction(label=ASD if score > 0 else CONTROL, score=score)
