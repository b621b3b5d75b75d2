"""Gaussian naive Bayes.

Features are continuous after normalization, so per-feature class
likelihoods are Gaussians with maximum-likelihood mean and population
variance, floored to avoid singular densities. Posteriors are computed in
log space and renormalized to sum to one; a posterior tie predicts bug.
"""

from __future__ import annotations

import numpy as np

from .common import check_predict, check_training


class GaussianNbClassifier:
    kind = "nb"

    def __init__(self, var_floor: float = 1e-9):
        if var_floor <= 0:
            raise ValueError("variance floor must be positive")
        self.var_floor = var_floor
        self._priors = None  # shape (2,), index = label
        self._means = None  # shape (2, d)
        self._vars = None  # shape (2, d)

    def fit(self, X: np.ndarray, y: np.ndarray) -> "GaussianNbClassifier":
        X, y = check_training(X, y)
        n = X.shape[0]
        priors = np.empty(2)
        means = np.empty((2, X.shape[1]))
        variances = np.empty((2, X.shape[1]))
        for c in (0, 1):
            rows = X[y == c]
            priors[c] = rows.shape[0] / n
            means[c] = rows.mean(axis=0)
            variances[c] = np.maximum(rows.var(axis=0), self.var_floor)
        self._priors, self._means, self._vars = priors, means, variances
        return self

    @classmethod
    def from_parameters(cls, priors, means, variances, var_floor: float = 1e-9) -> "GaussianNbClassifier":
        """Build a model from hand-set parameters (arrays indexed by label)."""
        clf = cls(var_floor=var_floor)
        clf._priors = np.asarray(priors, dtype=np.float64)
        clf._means = np.atleast_2d(np.asarray(means, dtype=np.float64))
        clf._vars = np.maximum(np.atleast_2d(np.asarray(variances, dtype=np.float64)), var_floor)
        return clf

    def _log_joint(self, X: np.ndarray) -> np.ndarray:
        lj = np.empty((X.shape[0], 2))
        for c in (0, 1):
            var = self._vars[c]
            log_density = -0.5 * (np.log(2.0 * np.pi * var) + (X - self._means[c]) ** 2 / var)
            lj[:, c] = np.log(self._priors[c]) + log_density.sum(axis=1)
        return lj

    def predict_posteriors(self, X: np.ndarray) -> np.ndarray:
        """Normalized class posteriors, columns ordered [non-bug, bug]."""
        if self._priors is None:
            raise ValueError("classifier is not fitted")
        X = check_predict(X, self._means.shape[1])
        lj = self._log_joint(X)
        lj -= lj.max(axis=1, keepdims=True)
        post = np.exp(lj)
        post /= post.sum(axis=1, keepdims=True)
        return post

    def predict(self, X: np.ndarray) -> np.ndarray:
        post = self.predict_posteriors(X)
        return (post[:, 1] >= post[:, 0]).astype(np.int64)

    def hyperparameters(self) -> dict:
        return {"var_floor": self.var_floor}

    def parameters(self) -> dict:
        return {
            "priors": self._priors.tolist(),
            "means": self._means.tolist(),
            "variances": self._vars.tolist(),
        }

    @classmethod
    def from_saved(cls, hyper: dict, params: dict) -> "GaussianNbClassifier":
        return cls.from_parameters(
            params["priors"], params["means"], params["variances"], **hyper
        )
