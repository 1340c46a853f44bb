"""Linear discriminant on pooled within-class and between-class scatter.

S_w = sum_i P(w_i) Cov_i        (class covariances, population divisor)
S_b = sum_i P(w_i) (M_i - M)(M_i - M)^T

The decision direction is w = (S_w + ridge*I)^-1 (M_asd - M_control) and the
score incorporates the log prior ratio, so the decision boundary is the
usual equal-covariance Gaussian discriminant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, SingularScatter
from ..feature_table import ASD, CONTROL, FeatureTable
from .common import LdaConfig, Prediction


def scatter_matrices(x, y):
    """(S_w, S_b, class means, priors) for binary labels 0/1."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    n, d = x.shape
    means = np.zeros((2, d))
    priors = np.zeros(2)
    s_w = np.zeros((d, d))
    for cls in (CONTROL, ASD):
        rows = x[y == cls]
        if len(rows) == 0:
            continue
        priors[cls] = len(rows) / n
        means[cls] = rows.mean(axis=0)
        centered = rows - means[cls]
        s_w += priors[cls] * (centered.T @ centered) / len(rows)
    grand = x.mean(axis=0)
    s_b = np.zeros((d, d))
    for cls in (CONTROL, ASD):
        if priors[cls] > 0:
            delta = (means[cls] - grand)[:, None]
            s_b += priors[cls] * (delta @ delta.T)
    return s_w, s_b, means, priors


def lda_scatter(table: FeatureTable, feature_subset):
    """Scatter decomposition straight from a table."""
    x = table.feature_matrix(tuple(feature_subset))
    return scatter_matrices(x, table.labels)


@dataclass(eq=False)
class LdaModel:
    w: np.ndarray
    bias: float
    means: np.ndarray
    priors: np.ndarray
    s_w: np.ndarray
    feature_names: tuple[str, ...]


def fit(config: LdaConfig, x, y, feature_names) -> LdaModel:
    s_w, _, means, priors = scatter_matrices(x, y)
    d = s_w.shape[0]
    if config.ridge is None:
        ridge = 1e-6 * float(np.trace(s_w)) / d
    else:
        ridge = config.ridge
    try:
        w = np.linalg.solve(s_w + ridge * np.eye(d), means[ASD] - means[CONTROL])
    except np.linalg.LinAlgError:
        raise SingularScatter(
            "pooled within-class scatter is singular; set a positive ridge"
        ) from None
    bias = -0.5 * float(w @ (means[ASD] + means[CONTROL]))
    bias += float(np.log(priors[ASD] / priors[CONTROL]))
    return LdaModel(w=w, bias=bias, means=means, priors=priors, s_w=s_w,
                    feature_names=tuple(feature_names))


def predict(model: LdaModel, x) -> Prediction:
    x = np.asarray(x, dtype=float)
    if x.shape != (len(model.feature_names),):
        raise DimensionMismatch(
            f"expected {len(model.feature_names)} features, got {x.shape}")
    score = float(model.w @ x + model.bias)
    return Prediction(label=ASD if score > 0 else CONTROL, score=score)
