"""Five classifiers behind a uniform train/predict contract.

train() pulls the requested feature columns out of a table, refuses
single-class data, and dispatches on the config type. predict() dispatches
on the model type; every family validates input dimensions and applies its
own stored scaling.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateData
from ..feature_table import FeatureTable
from . import forest, knn, lda, mlp, svm
from .common import (
    ClassifierConfig,
    KnnConfig,
    LdaConfig,
    MlpConfig,
    Prediction,
    RfConfig,
    SvmConfig,
)
from .forest import RfModel
from .io import load_model, model_from_dict, model_to_dict, save_model
from .knn import KnnModel, knn_vote
from .lda import LdaModel, lda_scatter
from .mlp import MlpModel, mlp_forward, mlp_train_epoch
from .svm import SvmModel, rbf_kernel, smo_fit

TrainedModel = LdaModel | SvmModel | RfModel | MlpModel | KnnModel

_FAMILIES = (
    (LdaConfig, lda),
    (SvmConfig, svm),
    (RfConfig, forest),
    (MlpConfig, mlp),
    (KnnConfig, knn),
)

CONFIG_BY_NAME = {
    "lda": LdaConfig,
    "svm": SvmConfig,
    "rf": RfConfig,
    "mlp": MlpConfig,
    "knn": KnnConfig,
}


def family_name(config_or_model) -> str:
    name = type(config_or_model).__name__
    for prefix in ("Lda", "Svm", "Rf", "Mlp", "Knn"):
        if name.startswith(prefix):
            return prefix.lower()
    raise TypeError(f"not a classifier config or model: {name}")


def train(config: ClassifierConfig, table: FeatureTable,
          feature_subset) -> TrainedModel:
    names = tuple(feature_subset)
    if not names:
        raise ValueError("feature subset is empty")
    x = table.feature_matrix(names)
    y = table.labels
    if np.unique(y).size < 2:
        raise DegenerateData("training needs at least one example per class")
    for config_type, module in _FAMILIES:
        if isinstance(config, config_type):
            return module.fit(config, x, y, names)
    raise TypeError(f"unknown classifier config: {type(config).__name__}")


_PREDICTORS = (
    (LdaModel, lda.predict),
    (SvmModel, svm.predict),
    (RfModel, forest.predict),
    (MlpModel, mlp.predict),
    (KnnModel, knn.predict),
)


def predict(model: TrainedModel, features) -> Prediction:
    for model_type, predictor in _PREDICTORS:
        if isinstance(model, model_type):
            return predictor(model, features)
    raise TypeError(f"unknown model type: {type(model).__name__}")


__all__ = [
    "ClassifierConfig", "LdaConfig", "SvmConfig", "RfConfig", "MlpConfig",
    "KnnConfig", "TrainedModel", "LdaModel", "SvmModel", "RfModel",
    "MlpModel", "KnnModel", "Prediction", "CONFIG_BY_NAME",
    "train", "predict", "family_name",
    "lda_scatter", "rbf_kernel", "smo_fit", "mlp_forward", "mlp_train_epoch",
    "knn_vote", "save_model", "load_model", "model_to_dict", "model_from_dict",
]
