"""Versioned JSON persistence for trained models.

Format: a single JSON object with "format_version", "family", the feature
name list, and family-specific fields mirroring the model dataclasses.
Arrays are nested lists; round-tripping preserves predictions exactly.
"""

from __future__ import annotations

import json

import numpy as np

from ..feature_table import ScalingStats
from .forest import Leaf, Node, RfModel
from .knn import KnnModel
from .lda import LdaModel
from .mlp import MlpModel
from .svm import SvmModel

FORMAT_VERSION = 1


def _scaler_dict(scaler):
    if scaler is None:
        return None
    return {"mean": list(scaler.mean), "std": list(scaler.std)}


def _scaler_from(data):
    if data is None:
        return None
    return ScalingStats(mean=tuple(data["mean"]), std=tuple(data["std"]))


def _tree_dict(node):
    if isinstance(node, Leaf):
        return {"counts": list(node.counts)}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _tree_dict(node.left),
        "right": _tree_dict(node.right),
    }


def _tree_from(data):
    if "counts" in data:
        return Leaf(counts=tuple(data["counts"]))
    return Node(feature=data["feature"], threshold=data["threshold"],
                left=_tree_from(data["left"]), right=_tree_from(data["right"]))


def model_to_dict(model) -> dict:
    base = {"format_version": FORMAT_VERSION,
            "feature_names": list(model.feature_names)}
    if isinstance(model, LdaModel):
        base.update(family="lda", w=model.w.tolist(), bias=model.bias,
                    means=model.means.tolist(), priors=model.priors.tolist(),
                    s_w=model.s_w.tolist())
    elif isinstance(model, SvmModel):
        base.update(family="svm",
                    support_vectors=model.support_vectors.tolist(),
                    support_labels=model.support_labels.tolist(),
                    multipliers=model.multipliers.tolist(),
                    bias=model.bias, gamma=model.gamma,
                    scaler=_scaler_dict(model.scaler),
                    converged=model.converged)
    elif isinstance(model, RfModel):
        base.update(family="rf",
                    trees=[_tree_dict(tree) for tree in model.trees])
    elif isinstance(model, MlpModel):
        base.update(family="mlp",
                    weights=[w.tolist() for w in model.weights],
                    biases=[b.tolist() for b in model.biases],
                    scaler=_scaler_dict(model.scaler))
    elif isinstance(model, KnnModel):
        base.update(family="knn", points=model.points.tolist(),
                    labels=model.labels.tolist(), k=model.k,
                    scaler=_scaler_dict(model.scaler))
    else:
        raise TypeError(f"cannot serialize model of type {type(model).__name__}")
    return base


def model_from_dict(data) -> LdaModel | SvmModel | RfModel | MlpModel | KnnModel:
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version: {version!r}")
    names = tuple(data["feature_names"])
    family = data.get("family")
    if family == "lda":
        return LdaModel(w=np.array(data["w"]), bias=data["bias"],
                        means=np.array(data["means"]),
                        priors=np.array(data["priors"]),
                        s_w=np.array(data["s_w"]), feature_names=names)
    if family == "svm":
        return SvmModel(support_vectors=np.array(data["support_vectors"]),
                        support_labels=np.array(data["support_labels"]),
                        multipliers=np.array(data["multipliers"]),
                        bias=data["bias"], gamma=data["gamma"],
                        scaler=_scaler_from(data["scaler"]),
                        feature_names=names,
                        converged=data.get("converged", True))
    if family == "rf":
        return RfModel(trees=tuple(_tree_from(t) for t in data["trees"]),
                       feature_names=names)
    if family == "mlp":
        return MlpModel(weights=tuple(np.array(w) for w in data["weights"]),
                        biases=tuple(np.array(b) for b in data["biases"]),
                        scaler=_scaler_from(data["scaler"]),
                        feature_names=names)
    if family == "knn":
        return KnnModel(points=np.array(data["points"]),
                        labels=np.array(data["labels"], dtype=int),
                        k=data["k"], scaler=_scaler_from(data["scaler"]),
                        feature_names=names)
    raise ValueError(f"unknown model family: {family!r}")


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
