"""K-nearest-neighbor classifier with Euclidean distance and majority vote."""

from __future__ import annotations

import numpy as np

from .common import check_predict, check_training


def knn_vote(ordered_labels) -> int:
    """Majority label of a neighborhood.

    ``ordered_labels`` must be sorted nearest-first; on a tied count the
    label of the nearest neighbor among the tied classes wins.
    """
    labels = list(ordered_labels)
    if not labels:
        raise ValueError("empty neighborhood")
    counts = {}
    for lb in labels:
        counts[lb] = counts.get(lb, 0) + 1
    top = max(counts.values())
    tied = {lb for lb, c in counts.items() if c == top}
    for lb in labels:
        if lb in tied:
            return lb
    raise AssertionError("unreachable")


class KnnClassifier:
    """Stores the training rows; prediction ranks them by squared Euclidean
    distance, breaking distance ties by training-row index."""

    kind = "knn"

    def __init__(self, k: int = 5):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.k = k
        self._X = None
        self._y = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "KnnClassifier":
        X, y = check_training(X, y)
        if self.k > X.shape[0]:
            raise ValueError(f"k={self.k} exceeds training size {X.shape[0]}")
        self._X = X.copy()
        self._y = y.copy()
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if self._X is None:
            raise ValueError("classifier is not fitted")
        X = check_predict(X, self._X.shape[1])
        n_train = self._X.shape[0]
        order_index = np.arange(n_train)
        out = np.empty(X.shape[0], dtype=np.int64)
        for i, q in enumerate(X):
            d2 = ((self._X - q) ** 2).sum(axis=1)
            order = np.lexsort((order_index, d2))[: self.k]
            out[i] = knn_vote(self._y[order])
        return out

    def hyperparameters(self) -> dict:
        return {"k": self.k}

    def parameters(self) -> dict:
        return {"X": self._X.tolist(), "y": self._y.tolist()}

    @classmethod
    def from_saved(cls, hyper: dict, params: dict) -> "KnnClassifier":
        clf = cls(**hyper)
        clf._X = np.asarray(params["X"], dtype=np.float64)
        clf._y = np.asarray(params["y"], dtype=np.int64)
        return clf
