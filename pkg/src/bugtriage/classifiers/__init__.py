"""Five binary classifiers behind one fit/predict contract.

Labels are integers: 1 = bug (the positive class), 0 = non-bug. Every
classifier validates its training input the same way, never mutates it, and
is deterministic given (hyperparameters, data, seed).
"""

from .forest import DecisionTreeClassifier, RandomForestClassifier
from .knn import KnnClassifier, knn_vote
from .logistic import LogisticRegressionClassifier, lr_gradient, lr_loss
from .naive_bayes import GaussianNbClassifier
from .serialize import load_model, save_model
from .svm import LinearSvmClassifier

CLASSIFIER_KINDS = {
    "knn": KnnClassifier,
    "nb": GaussianNbClassifier,
    "lr": LogisticRegressionClassifier,
    "svm": LinearSvmClassifier,
    "rf": RandomForestClassifier,
}


def make_classifier(kind: str, **params):
    try:
        cls = CLASSIFIER_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown classifier kind {kind!r}; expected one of {sorted(CLASSIFIER_KINDS)}") from None
    return cls(**params)


__all__ = [
    "CLASSIFIER_KINDS",
    "DecisionTreeClassifier",
    "GaussianNbClassifier",
    "KnnClassifier",
    "LinearSvmClassifier",
    "LogisticRegressionClassifier",
    "RandomForestClassifier",
    "knn_vote",
    "load_model",
    "lr_gradient",
    "lr_loss",
    "make_classifier",
    "save_model",
]
