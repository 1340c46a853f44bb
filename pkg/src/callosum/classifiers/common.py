"""Shared classifier plumbing: hyperparameter configs and predictions.

Scaling policy: SVM, MLP and KNN z-score their inputs internally (stats fit
on training rows, stored in the model, reapplied at predict time) because
distance- and gradient-based methods are scale-sensitive and brain volume is
orders of magnitude larger than circularity. LDA and the forest operate on
raw values; their decisions are scale-invariant by construction.

Tie rule, everywhere: a score exactly at the decision threshold predicts
control.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Prediction:
    """Predicted label plus the decision value that produced it.

    score is the raw decision value for LDA/SVM (label asd iff score > 0)
    and a class-asd probability-like value for RF/MLP/KNN (label asd iff
    score > 0.5).
    """

    label: int
    score: float


def _require_positive(**kwargs):
    for name, value in kwargs.items():
        if value <= 0:
            raise ValueError(f"{name} must be strictly positive, got {value}")


@dataclass(frozen=True)
class LdaConfig:
    """ridge=None picks 1e-6 * trace(S_w)/d at fit time; ridge=0 disables it."""

    ridge: float | None = None

    def __post_init__(self):
        if self.ridge is not None and self.ridge < 0:
            raise ValueError(f"ridge must be >= 0, got {self.ridge}")


@dataclass(frozen=True)
class SvmConfig:
    c: float = 1.0
    gamma: float | str = "scale"
    tol: float = 1e-3
    max_passes: int = 10
    seed: int = 0

    def __post_init__(self):
        _require_positive(c=self.c, tol=self.tol, max_passes=self.max_passes)
        if isinstance(self.gamma, str):
            if self.gamma != "scale":
                raise ValueError(f"gamma must be a positive number or 'scale', "
                                 f"got {self.gamma!r}")
        else:
            _require_positive(gamma=self.gamma)


@dataclass(frozen=True)
class RfConfig:
    n_trees: int = 10
    max_features: str = "sqrt"
    min_leaf: int = 1
    seed: int = 0

    def __post_init__(self):
        _require_positive(n_trees=self.n_trees, min_leaf=self.min_leaf)
        if self.max_features != "sqrt":
            raise ValueError(f"max_features supports only 'sqrt', "
                             f"got {self.max_features!r}")


@dataclass(frozen=True)
class MlpConfig:
    """batch=0 trains on the full batch each epoch."""

    hidden: tuple[int, ...] = (16,)
    lr: float = 0.01
    epochs: int = 500
    batch: int = 0
    seed: int = 0

    def __post_init__(self):
        _require_positive(lr=self.lr, epochs=self.epochs)
        if self.batch < 0:
            raise ValueError(f"batch must be >= 0, got {self.batch}")
        if not self.hidden or any(h < 1 for h in self.hidden):
            raise ValueError(f"hidden layer sizes must be >= 1, got {self.hidden}")


@dataclass(frozen=True)
class KnnConfig:
    k: int = 3

    def __post_init__(self):
        _require_positive(k=self.k)


ClassifierConfig = LdaConfig | SvmConfig | RfConfig | MlpConfig | KnnConfig
