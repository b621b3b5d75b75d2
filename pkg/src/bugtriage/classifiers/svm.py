"""Linear soft-margin SVM trained in the primal.

Minimizes (1/(2*C*n))*||w||^2 + mean hinge(1 - s*(w.x + b)) over labels
s in {-1, +1} by mini-batch subgradient descent with a decaying step and a
seeded per-epoch shuffle. The decision rule is sign(w.x + b), with the
boundary value itself classified as bug.
"""

from __future__ import annotations

import numpy as np

from .common import check_predict, check_training


class LinearSvmClassifier:
    kind = "svm"

    def __init__(
        self,
        c: float = 1.0,
        epochs: int = 300,
        batch_size: int = 32,
        step: float = 0.5,
        seed: int = 0,
    ):
        if c <= 0:
            raise ValueError("C must be positive")
        if epochs < 1 or batch_size < 1:
            raise ValueError("epochs and batch size must be >= 1")
        self.c = c
        self.epochs = epochs
        self.batch_size = batch_size
        self.step = step
        self.seed = seed
        self._w = None
        self._b = 0.0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LinearSvmClassifier":
        X, y = check_training(X, y)
        n, d = X.shape
        s = 2.0 * y - 1.0
        lam = 1.0 / (self.c * n)
        w = np.zeros(d)
        b = 0.0
        rng = np.random.default_rng(self.seed)
        t = 0
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for start in range(0, n, self.batch_size):
                batch = order[start : start + self.batch_size]
                eta = self.step / (1.0 + self.step * lam * t)
                margins = s[batch] * (X[batch] @ w + b)
                active = margins < 1.0
                grad_w = lam * w
                grad_b = 0.0
                if active.any():
                    xa = X[batch][active]
                    sa = s[batch][active]
                    grad_w = grad_w - (sa[:, None] * xa).sum(axis=0) / batch.size
                    grad_b = -sa.sum() / batch.size
                w -= eta * grad_w
                b -= eta * grad_b
                t += 1
        self._w = w
        self._b = float(b)
        return self

    @property
    def weights(self) -> np.ndarray:
        if self._w is None:
            raise ValueError("classifier is not fitted")
        return self._w

    @property
    def bias(self) -> float:
        if self._w is None:
            raise ValueError("classifier is not fitted")
        return self._b

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = check_predict(X, self.weights.shape[0])
        return X @ self._w + self._b

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.decision_function(X) >= 0.0).astype(np.int64)

    def hyperparameters(self) -> dict:
        return {
            "c": self.c,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "step": self.step,
            "seed": self.seed,
        }

    def parameters(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias}

    @classmethod
    def from_saved(cls, hyper: dict, params: dict) -> "LinearSvmClassifier":
        clf = cls(**hyper)
        clf._w = np.asarray(params["weights"], dtype=np.float64)
        clf._b = float(params["bias"])
        return clf
