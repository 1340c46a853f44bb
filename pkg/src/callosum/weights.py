"""Feature weighting and threshold selection.

Four filter statistics scored per feature against the class label, computed
on equal-frequency contingency tables: information gain, gain ratio,
Pearson chi-square, and symmetrical uncertainty. Raw scores are min-max
normalized into [0, 1] across features so a single threshold is meaningful
for every method.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .discretizer import ContingencyTable, build_contingency, fit_bins
from .errors import DegenerateData, EmptyCounts
from .feature_table import FeatureTable

METHODS = ("info_gain", "gain_ratio", "chi_square", "sym_uncertainty")

DEFAULT_METHOD = "chi_square"
DEFAULT_THRESHOLD = 0.4
DEFAULT_N_BINS = 10


def entropy(class_counts) -> float:
    """Shannon entropy in bits of a count vector, with 0*log0 = 0."""
    counts = np.asarray(class_counts, dtype=float)
    if (counts < 0).any():
        raise ValueError("counts must be nonnegative")
    total = counts.sum()
    if total <= 0:
        raise EmptyCounts("entropy of an empty count vector is undefined")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def information_gain(ct: ContingencyTable) -> float:
    """Label entropy minus bin-weighted conditional label entropy."""
    n = ct.n
    if n <= 0:
        raise EmptyCounts("contingency table is empty")
    h_label = entropy(ct.class_totals)
    conditional = 0.0
    for row, n_bin in zip(ct.counts, ct.bin_totals):
        if n_bin > 0:
            conditional += (n_bin / n) * entropy(row)
    return h_label - conditional


def intrinsic_value(ct: ContingencyTable) -> float:
    """Entropy of the feature's bin distribution (always >= 0)."""
    if ct.n <= 0:
        raise EmptyCounts("contingency table is empty")
    return entropy(ct.bin_totals)


def gain_ratio(ct: ContingencyTable) -> float:
    """Information gain over intrinsic value; 0 for a constant feature."""
    iv = intrinsic_value(ct)
    if iv == 0.0:
        return 0.0
    return information_gain(ct) / iv


def chi_square(ct: ContingencyTable) -> float:
    """Pearson statistic sum((O-E)^2 / E); cells with E=0 contribute 0."""
    n = ct.n
    if n <= 0:
        raise EmptyCounts("contingency table is empty")
    expected = np.outer(ct.bin_totals, ct.class_totals) / n
    observed = ct.counts.astype(float)
    mask = expected > 0
    diff = observed[mask] - expected[mask]
    return float((diff * diff / expected[mask]).sum())


def symmetrical_uncertainty(ct: ContingencyTable) -> float:
    """2*IG / (H(bins) + H(labels)), in [0, 1]; 0 when the denominator is 0."""
    denom = intrinsic_value(ct) + entropy(ct.class_totals)
    if denom == 0.0:
        return 0.0
    return 2.0 * information_gain(ct) / denom


_SCORERS = {
    "info_gain": information_gain,
    "gain_ratio": gain_ratio,
    "chi_square": chi_square,
    "sym_uncertainty": symmetrical_uncertainty,
}


@dataclass(frozen=True)
class WeightVector:
    """Per-feature raw scores and their min-max normalized weights."""

    method: str
    feature_names: tuple[str, ...]
    raw_scores: dict[str, float]
    weights: dict[str, float]

    def ranked(self) -> tuple[str, ...]:
        """Feature names by descending weight; ties keep canonical order."""
        order = {name: i for i, name in enumerate(self.feature_names)}
        return tuple(sorted(self.feature_names,
                            key=lambda f: (-self.weights[f], order[f])))


@dataclass(frozen=True)
class SelectionResult:
    threshold: float
    selected: tuple[str, ...]
    rejected: tuple[str, ...]


def weigh_all(table: FeatureTable, method: str,
              n_bins: int = DEFAULT_N_BINS) -> WeightVector:
    """Score every feature with one method and normalize into [0, 1].

    If all raw scores are equal the weights are all 0 (there is nothing to
    rank); otherwise the min weight is exactly 0 and the max exactly 1.
    """
    if method not in _SCORERS:
        raise ValueError(f"unknown weighting method {method!r}; "
                         f"expected one of {METHODS}")
    if table.n_classes() < 2:
        raise DegenerateData("feature weighting needs at least two classes")
    scorer = _SCORERS[method]
    labels = table.labels
    raw: dict[str, float] = {}
    for name in table.feature_names:
        col = table.column(name)
        ct = build_contingency(col, labels, fit_bins(col, n_bins))
        raw[name] = scorer(ct)
    values = np.array([raw[name] for name in table.feature_names])
    lo, hi = values.min(), values.max()
    if hi > lo:
        weights = {name: float((raw[name] - lo) / (hi - lo))
                   for name in table.feature_names}
    else:
        weights = {name: 0.0 for name in table.feature_names}
    return WeightVector(method=method, feature_names=tuple(table.feature_names),
                        raw_scores=raw, weights=weights)


def select_by_threshold(wv: WeightVector, threshold: float) -> SelectionResult:
    """Keep features with weight >= threshold, ordered by descending weight."""
    selected = tuple(f for f in wv.ranked() if wv.weights[f] >= threshold)
    chosen = set(selected)
    rejected = tuple(f for f in wv.feature_names if f not in chosen)
    return SelectionResult(threshold=threshold, selected=selected,
                           rejected=rejected)


def write_weights_csv(wv: WeightVector, path) -> None:
    """One row per feature in rank order: feature, raw, weight."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "raw", "weight"])
        for name in wv.ranked():
            writer.writerow([name, repr(wv.raw_scores[name]),
                             repr(wv.weights[name])])
