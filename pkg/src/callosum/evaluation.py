"""Validation protocols and accuracy reporting.

Two split schemes: seeded stratified k-fold, and leave-one-site-out with one
fold per acquisition site. run_protocol drives a full evaluation; when
feature weighting is enabled, the subset is chosen from training rows only
(per fold) unless global selection is explicitly requested, so no test-row
statistic can leak into training.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, replace

import numpy as np

from .classifiers import family_name, predict, train
from .errors import EmptyTest, KTooLarge, SingleSite
from .feature_table import ASD, SITE_ORDER, FeatureTable
from .weights import (
    DEFAULT_N_BINS,
    select_by_threshold,
    weigh_all,
)


@dataclass(frozen=True)
class Fold:
    tag: str
    train_indices: tuple[int, ...]
    test_indices: tuple[int, ...]


@dataclass(frozen=True)
class SplitPlan:
    scheme: str  # "kfold" or "loso"
    folds: tuple[Fold, ...]


def kfold_split(table: FeatureTable, k: int, seed: int,
                stratify: bool = True) -> SplitPlan:
    """Seeded k-fold partition; stratified folds keep class proportions
    within one subject of the global split."""
    n = len(table)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    rng = np.random.default_rng(seed)
    if stratify:
        y = table.labels
        order: list[int] = []
        for cls in sorted(set(int(v) for v in y)):
            idx = np.flatnonzero(y == cls)
            if len(idx) < k:
                raise KTooLarge(
                    f"class {cls} has {len(idx)} members, fewer than k={k}; "
                    "use stratify=False for a plain partition")
            rng.shuffle(idx)
            order.extend(int(i) for i in idx)
    else:
        if k > n:
            raise KTooLarge(f"k={k} exceeds {n} rows")
        order = [int(i) for i in rng.permutation(n)]

    # Deal the (per-class contiguous) order round-robin: overall fold sizes
    # and per-class counts per fold both differ by at most one.
    buckets: list[list[int]] = [[] for _ in range(k)]
    for pos, row in enumerate(order):
        buckets[pos % k].append(row)

    all_rows = set(range(n))
    folds = []
    for i, bucket in enumerate(buckets):
        test = tuple(sorted(bucket))
        train_rows = tuple(sorted(all_rows.difference(bucket)))
        folds.append(Fold(tag=f"fold{i + 1}", train_indices=train_rows,
                          test_indices=test))
    return SplitPlan(scheme="kfold", folds=tuple(folds))


def loso_split(table: FeatureTable) -> SplitPlan:
    """One fold per distinct site, in canonical site order."""
    by_site: dict[str, list[int]] = {}
    for i, site in enumerate(table.sites):
        by_site.setdefault(site, []).append(i)
    if len(by_site) < 2:
        raise SingleSite("leave-one-site-out needs at least two sites")

    def site_key(site: str):
        try:
            return (SITE_ORDER.index(site), site)
        except ValueError:
            return (len(SITE_ORDER), site)

    n = len(table)
    folds = []
    for site in sorted(by_site, key=site_key):
        test = tuple(by_site[site])
        train_rows = tuple(i for i in range(n) if table.records[i].site != site)
        folds.append(Fold(tag=site, train_indices=train_rows, test_indices=test))
    return SplitPlan(scheme="loso", folds=tuple(folds))


@dataclass(frozen=True)
class Confusion:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def n(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


def accuracy(confusion: Confusion) -> float:
    if confusion.n == 0:
        raise EmptyTest("accuracy over an empty test set is undefined")
    return (confusion.tp + confusion.tn) / confusion.n


@dataclass(frozen=True)
class WeightingSpec:
    method: str
    threshold: float
    n_bins: int = DEFAULT_N_BINS


@dataclass(frozen=True)
class FoldResult:
    tag: str
    n_train: int
    n_test: int
    confusion: Confusion
    accuracy: float
    selected: tuple[str, ...]


@dataclass(frozen=True)
class EvalReport:
    scheme: str
    classifier: str
    folds: tuple[FoldResult, ...]
    mean_accuracy: float
    provenance: dict
    converged: bool = True


def _select_subset(table: FeatureTable, weighting: WeightingSpec):
    wv = weigh_all(table, weighting.method, weighting.n_bins)
    selected = select_by_threshold(wv, weighting.threshold).selected
    if not selected:
        raise KTooLarge(
            f"threshold {weighting.threshold} selected no features")
    return selected


def run_protocol(table: FeatureTable, plan: SplitPlan, config,
                 weighting: WeightingSpec | None = None, seed: int = 0,
                 global_selection: bool = False) -> EvalReport:
    """Train and score every fold of the plan.

    Seeded classifiers get a per-fold seed of seed + fold index, so folds
    can run in any order (or in parallel) with identical results.
    """
    global_subset = None
    if weighting is not None and global_selection:
        global_subset = _select_subset(table, weighting)

    converged = True
    folds: list[FoldResult] = []
    for index, fold in enumerate(plan.folds):
        train_table = table.subset_rows(fold.train_indices)
        if weighting is None:
            subset = tuple(table.feature_names)
        elif global_subset is not None:
            subset = global_subset
        else:
            subset = _select_subset(train_table, weighting)

        fold_config = config
        if hasattr(config, "seed"):
            fold_config = replace(config, seed=seed + index)
        model = train(fold_config, train_table, subset)
        if getattr(model, "converged", True) is False:
            converged = False

        test_table = table.subset_rows(fold.test_indices)
        x_test = test_table.feature_matrix(subset)
        y_test = test_table.labels
        tp = tn = fp = fn = 0
        for row, truth in zip(x_test, y_test):
            guess = predict(model, row).label
            if truth == ASD:
                tp += guess == ASD
                fn += guess != ASD
            else:
                tn += guess != ASD
                fp += guess == ASD
        confusion = Confusion(tp=int(tp), tn=int(tn), fp=int(fp), fn=int(fn))
        folds.append(FoldResult(
            tag=fold.tag,
            n_train=len(fold.train_indices),
            n_test=len(fold.test_indices),
            confusion=confusion,
            accuracy=accuracy(confusion),
            selected=subset,
        ))

    mean_accuracy = sum(f.accuracy for f in folds) / len(folds)
    provenance = {
        "scheme": plan.scheme,
        "classifier": family_name(config),
        "config": asdict(config),
        "weighting": None if weighting is None else asdict(weighting),
        "global_selection": bool(global_selection),
        "seed": seed,
    }
    return EvalReport(scheme=plan.scheme, classifier=family_name(config),
                      folds=tuple(folds), mean_accuracy=mean_accuracy,
                      provenance=provenance, converged=converged)


def write_folds_csv(report: EvalReport, path) -> None:
    """One row per fold: tag, sizes, confusion counts, accuracy, features."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tag", "n_train", "n_test", "tp", "tn", "fp", "fn",
                         "accuracy", "selected_features"])
        for fold in report.folds:
            writer.writerow([
                fold.tag, fold.n_train, fold.n_test,
                fold.confusion.tp, fold.confusion.tn,
                fold.confusion.fp, fold.confusion.fn,
                repr(fold.accuracy), ";".join(fold.selected),
            ])


def summary_text(report: EvalReport) -> str:
    """Deterministic JSON summary block."""
    payload = {
        "scheme": report.scheme,
        "classifier": report.classifier,
        "mean_accuracy": report.mean_accuracy,
        "converged": report.converged,
        "folds": [{"tag": f.tag, "n_train": f.n_train, "n_test": f.n_test,
                   "accuracy": f.accuracy} for f in report.folds],
        "provenance": report.provenance,
    }
    return json.dumps(payload, indent=2, sort_keys=True)
