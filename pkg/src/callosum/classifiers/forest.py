"""Random forest of Gini decision trees.

Each tree trains on a bootstrap sample of size n with sqrt(d) candidate
features per split and grows until leaves are pure (or hit min_leaf). The
forest predicts by majority vote; its score is the fraction of trees voting
asd. Per-tree RNG seeds derive as seed + tree index, so tree training is
order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch
from ..feature_table import ASD, CONTROL
from .common import Prediction, RfConfig


@dataclass(frozen=True)
class Leaf:
    counts: tuple[int, int]  # (control, asd) training rows that reached it

    @property
    def label(self) -> int:
        # Tie goes to control.
        return ASD if self.counts[ASD] > self.counts[CONTROL] else CONTROL


@dataclass(frozen=True)
class Node:
    feature: int
    threshold: float
    left: "Node | Leaf"   # values <= threshold
    right: "Node | Leaf"


def _best_split(x, y, feature_ids, min_leaf):
    """(weighted gini, feature, threshold) of the best candidate, or None."""
    n = len(y)
    best = None
    for f in feature_ids:
        values = x[:, f]
        order = np.argsort(values, kind="stable")
        vs = values[order]
        ones = np.cumsum(y[order])
        total_one = ones[-1]
        ks = np.arange(1, n)
        valid = vs[1:] != vs[:-1]
        if min_leaf > 1:
            valid &= (ks >= min_leaf) & (n - ks >= min_leaf)
        if not valid.any():
            continue
        k = ks[valid]
        nl = k.astype(float)
        nr = n - nl
        left_one = ones[k - 1].astype(float)
        right_one = total_one - left_one
        gini_l = 1.0 - (left_one / nl) ** 2 - ((nl - left_one) / nl) ** 2
        gini_r = 1.0 - (right_one / nr) ** 2 - ((nr - right_one) / nr) ** 2
        weighted = (nl * gini_l + nr * gini_r) / n
        m = int(np.argmin(weighted))
        score = float(weighted[m])
        if best is None or score < best[0]:
            pos = int(k[m])
            threshold = 0.5 * (float(vs[pos - 1]) + float(vs[pos]))
            best = (score, int(f), threshold)
    return best


def _grow(x, y, rng, n_candidates, min_leaf):
    counts = (int((y == CONTROL).sum()), int((y == ASD).sum()))
    if counts[CONTROL] == 0 or counts[ASD] == 0 or len(y) < 2 * min_leaf:
        return Leaf(counts)
    d = x.shape[1]
    feature_ids = rng.choice(d, size=n_candidates, replace=False)
    best = _best_split(x, y, feature_ids, min_leaf)
    if best is None:
        return Leaf(counts)
    _, feature, threshold = best
    mask = x[:, feature] <= threshold
    return Node(
        feature=feature,
        threshold=threshold,
        left=_grow(x[mask], y[mask], rng, n_candidates, min_leaf),
        right=_grow(x[~mask], y[~mask], rng, n_candidates, min_leaf),
    )


def tree_predict(tree, x) -> int:
    node = tree
    while isinstance(node, Node):
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.label


@dataclass(eq=False)
class RfModel:
    trees: tuple
    feature_names: tuple[str, ...]


def fit(config: RfConfig, x, y, feature_names) -> RfModel:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    n, d = x.shape
    n_candidates = max(1, int(math.sqrt(d)))
    trees = []
    for t in range(config.n_trees):
        rng = np.random.default_rng(config.seed + t)
        boot = rng.integers(0, n, size=n)
        trees.append(_grow(x[boot], y[boot], rng, n_candidates, config.min_leaf))
    return RfModel(trees=tuple(trees), feature_names=tuple(feature_names))


def predict(model: RfModel, x) -> Prediction:
    x = np.asarray(x, dtype=float)
    if x.shape != (len(model.feature_names),):
        raise DimensionMismatch(
            f"expected {len(model.feature_names)} features, got {x.shape}")
    votes = sum(tree_predict(tree, x) == ASD for tree in model.trees)
    score = votes / len(model.trees)
    return Prediction(label=ASD if score > 0.5 else CONTROL, score=float(score))
