"""Logistic regression trained by full-batch gradient descent.

The model is pi(x) = sigmoid(c0 + c . x); a report is classified bug when
pi >= threshold (default 0.5). The training objective is the mean negative
log-likelihood plus an L2 penalty (l2/2)*||c[1:]||^2 on the non-intercept
coefficients; ``lr_gradient`` is its exact gradient and is checked against
central finite differences in the test suite.
"""

from __future__ import annotations

import numpy as np

from .common import check_predict, check_training


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))


def lr_loss(coeffs: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float = 0.0) -> float:
    """Mean negative log-likelihood plus the L2 term; 0 data term for an
    empty batch."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    penalty = 0.5 * l2 * float(coeffs[1:] @ coeffs[1:])
    n = len(y)
    if n == 0:
        return penalty
    z = coeffs[0] + np.asarray(X, dtype=np.float64) @ coeffs[1:]
    y = np.asarray(y, dtype=np.float64)
    # log(1 + e^z) evaluated stably
    log1pexp = np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))
    nll = log1pexp - y * z
    return float(nll.mean()) + penalty


def lr_gradient(coeffs: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float = 0.0) -> np.ndarray:
    """Gradient of ``lr_loss`` with respect to the coefficient vector."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    grad = np.zeros_like(coeffs)
    grad[1:] = l2 * coeffs[1:]
    n = len(y)
    if n == 0:
        return grad
    X = np.asarray(X, dtype=np.float64)
    residual = _sigmoid(coeffs[0] + X @ coeffs[1:]) - np.asarray(y, dtype=np.float64)
    grad[0] += residual.mean()
    grad[1:] += X.T @ residual / n
    return grad


class LogisticRegressionClassifier:
    kind = "lr"

    def __init__(
        self,
        step: float = 0.1,
        max_iter: int = 5000,
        tol: float = 1e-6,
        l2: float = 1e-4,
        threshold: float = 0.5,
    ):
        if not 0.0 < threshold < 1.0:
            raise ValueError("threshold must lie in (0, 1)")
        self.step = step
        self.max_iter = max_iter
        self.tol = tol
        self.l2 = l2
        self.threshold = threshold
        self._coeffs = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LogisticRegressionClassifier":
        X, y = check_training(X, y)
        coeffs = np.zeros(X.shape[1] + 1)
        for _ in range(self.max_iter):
            grad = lr_gradient(coeffs, X, y, self.l2)
            if np.linalg.norm(grad) < self.tol:
                break
            coeffs -= self.step * grad
        self._coeffs = coeffs
        return self

    @property
    def coefficients(self) -> np.ndarray:
        if self._coeffs is None:
            raise ValueError("classifier is not fitted")
        return self._coeffs

    def predict_pi(self, X: np.ndarray) -> np.ndarray:
        coeffs = self.coefficients
        X = check_predict(X, coeffs.shape[0] - 1)
        return _sigmoid(coeffs[0] + X @ coeffs[1:])

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_pi(X) >= self.threshold).astype(np.int64)

    def hyperparameters(self) -> dict:
        return {
            "step": self.step,
            "max_iter": self.max_iter,
            "tol": self.tol,
            "l2": self.l2,
            "threshold": self.threshold,
        }

    def parameters(self) -> dict:
        return {"coefficients": self.coefficients.tolist()}

    @classmethod
    def from_saved(cls, hyper: dict, params: dict) -> "LogisticRegressionClassifier":
        clf = cls(**hyper)
        clf._coeffs = np.asarray(params["coefficients"], dtype=np.float64)
        return clf
