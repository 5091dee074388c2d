"""The six baseline classifiers: majority, random, SVM, LR, RF and DT."""

from .base import (
    FOREST,
    LOGREG,
    MAJORITY,
    MODEL_KINDS,
    RANDOM,
    SVM,
    TREE,
    ForestModel,
    Hyperparams,
    LinearModel,
    TrainedModel,
    TreeModel,
    predict,
    random_labels,
    scale_linear,
    train_majority,
    train_random,
)
from .io import load_model, save_model
from .linear import fit_linear, hinge_objective, predict_proba, softmax, softmax_objective, train_logreg, train_svm
from .tree import build_tree, gini, train_forest, train_tree, weighted_gini

TRAINERS = {
    LOGREG: train_logreg,
    SVM: train_svm,
    TREE: train_tree,
    FOREST: train_forest,
}


def train(kind: str, X, y, k: int, hp: Hyperparams = Hyperparams()) -> TrainedModel:
    """Train any model kind; majority and random ignore ``X``."""
    if kind == MAJORITY:
        return train_majority(y, k)
    if kind == RANDOM:
        return train_random(k, hp.seed)
    try:
        trainer = TRAINERS[kind]
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}") from None
    return trainer(X, y, k, hp)


__all__ = [
    "FOREST", "LOGREG", "MAJORITY", "MODEL_KINDS", "RANDOM", "SVM", "TREE",
    "ForestModel", "Hyperparams", "LinearModel", "TrainedModel", "TreeModel",
    "build_tree", "fit_linear", "gini", "hinge_objective", "load_model", "predict",
    "predict_proba", "random_labels", "save_model", "scale_linear", "softmax",
    "softmax_objective", "train", "train_forest", "train_logreg", "train_majority",
    "train_random", "train_svm", "train_tree", "weighted_gini",
]
