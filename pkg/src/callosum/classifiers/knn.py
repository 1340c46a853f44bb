"""Distance-weighted k-nearest-neighbour voting.

p(asd | q) = sum_k w_k [label_k = asd] / sum_k w_k with w_k = 1/d(k, q) over
Euclidean distance. A query at distance 0 from a training point takes that
point's label outright. Ties (equal distances at the cut, or a vote of
exactly 0.5) resolve deterministically: lowest training index, control.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, KTooLarge
from ..feature_table import ASD, CONTROL, ScalingStats
from .common import KnnConfig, Prediction


def knn_vote(points, labels, query, k: int) -> Prediction:
    points = np.asarray(points, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if k > len(points):
        raise KTooLarge(f"k={k} exceeds {len(points)} training points")
    diff = points - np.asarray(query, dtype=float)
    dist = np.sqrt((diff * diff).sum(axis=1))
    nearest = np.argsort(dist, kind="stable")[:k]
    if dist[nearest[0]] == 0.0:
        label = int(labels[nearest[0]])
        return Prediction(label=label, score=1.0 if label == ASD else 0.0)
    w = 1.0 / dist[nearest]
    p_asd = float(w[labels[nearest] == ASD].sum() / w.sum())
    return Prediction(label=ASD if p_asd > 0.5 else CONTROL, score=p_asd)


@dataclass(eq=False)
class KnnModel:
    points: np.ndarray  # scaled training matrix
    labels: np.ndarray
    k: int
    scaler: ScalingStats
    feature_names: tuple[str, ...]


def fit(config: KnnConfig, x, y, feature_names) -> KnnModel:
    x = np.asarray(x, dtype=float)
    if config.k > len(x):
        raise KTooLarge(f"k={config.k} exceeds {len(x)} training points")
    scaler = ScalingStats.from_matrix(x)
    return KnnModel(points=scaler.apply(x), labels=np.asarray(y, dtype=int),
                    k=config.k, scaler=scaler,
                    feature_names=tuple(feature_names))


def predict(model: KnnModel, x) -> Prediction:
    x = np.asarray(x, dtype=float)
    if x.shape != (len(model.feature_names),):
        raise DimensionMismatch(
            f"expected {len(model.feature_names)} features, got {x.shape}")
    return knn_vote(model.points, model.labels,
                    model.scaler.apply(x[None, :])[0], model.k)
