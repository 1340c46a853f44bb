"""Equal-frequency binning of continuous columns and bin-by-class counting.

The contingency tables built here are the shared substrate for every
feature-weighting statistic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch


@dataclass(frozen=True)
class BinningSpec:
    """Sorted interior cut points. k cut points define k+1 bins.

    Bin intervals are (-inf, c1], (c1, c2], ..., (ck, +inf): a value equal
    to a cut point falls in the lower bin.
    """

    cut_points: tuple[float, ...]

    def __post_init__(self):
        cuts = self.cut_points
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise ValueError("cut points must be strictly increasing")

    @property
    def n_bins(self) -> int:
        return len(self.cut_points) + 1

    def assign(self, values) -> np.ndarray:
        """Bin index for each value."""
        return np.searchsorted(np.asarray(self.cut_points),
                               np.asarray(values, dtype=float), side="left")


def fit_bins(column, n_bins: int) -> BinningSpec:
    """Equal-frequency cut points at the n_bins-1 interior quantiles.

    Quantiles interpolate linearly between order statistics. Duplicate
    quantile values collapse, and a cut at the column maximum is dropped
    (it would create an empty top bin), so the result may have fewer bins.
    """
    col = np.asarray(column, dtype=float)
    if col.size == 0:
        raise ValueError("cannot bin an empty column")
    if n_bins < 2:
        raise ValueError(f"n_bins must be >= 2, got {n_bins}")
    qs = np.quantile(col, np.arange(1, n_bins) / n_bins)
    top = col.max()
    cuts = tuple(float(c) for c in np.unique(qs) if c < top)
    return BinningSpec(cut_points=cuts)


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Nonnegative bin-by-class counts with marginals."""

    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2:
            raise ValueError("counts must be a 2-D bins x classes matrix")
        if (counts < 0).any():
            raise ValueError("counts must be nonnegative")
        object.__setattr__(self, "counts", counts)

    @property
    def bin_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def class_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def n(self) -> int:
        return int(self.counts.sum())


def build_contingency(column, labels, spec: BinningSpec,
                      n_classes: int = 2) -> ContingencyTable:
    """Count rows per (bin, class) cell; row order never matters."""
    col = np.asarray(column, dtype=float)
    y = np.asarray(labels, dtype=int)
    if col.shape[0] != y.shape[0]:
        raise LengthMismatch(
            f"column has {col.shape[0]} values but labels has {y.shape[0]}")
    if y.size and (y.min() < 0 or y.max() >= n_classes):
        raise ValueError(f"labels must lie in [0, {n_classes})")
    bins = spec.assign(col)
    counts = np.zeros((spec.n_bins, n_classes), dtype=np.int64)
    np.add.at(counts, (bins, y), 1)
    return ContingencyTable(counts=counts)
