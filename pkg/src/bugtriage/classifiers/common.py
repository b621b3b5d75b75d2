"""Shared input checks for the classifier family."""

from __future__ import annotations

import numpy as np


def check_training(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-dimensional, got shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise ValueError(f"y has {y.shape} entries for {X.shape[0]} rows")
    if X.shape[0] == 0:
        raise ValueError("empty training set")
    if not np.all(np.isfinite(X)):
        raise ValueError("training matrix contains non-finite values")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0 (non-bug) or 1 (bug)")
    if len(np.unique(y)) < 2:
        raise ValueError("single-class training data")
    return X, y


def check_predict(X: np.ndarray, width: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != width:
        raise ValueError(f"expected rows of width {width}, got shape {X.shape}")
    return X
