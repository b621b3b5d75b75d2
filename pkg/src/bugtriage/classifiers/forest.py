"""Axis-aligned decision trees and the bagged forest built on them.

Trees are grown greedily on Gini impurity to purity (or the depth/size
limits), scanning candidate thresholds at midpoints between distinct sorted
feature values. Candidate features per split are a without-replacement
sample driven by a splitmix64 stream so forests are bit-identical for a
fixed seed; when every feature is a candidate no random state is consumed
at all. The forest draws one bootstrap sample of size n per tree and
predicts by majority vote over trees (ties go to bug). The hot loops are
numba-compiled.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .common import check_predict, check_training


@njit(cache=True, inline="always")
def _splitmix64(state):
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True)
def _grow_tree(X, y, max_depth, min_samples_split, n_candidates, seed):
    n, d = X.shape
    max_nodes = 2 * n + 1
    feature = np.full(max_nodes, -1, np.int64)
    threshold = np.zeros(max_nodes, np.float64)
    left = np.full(max_nodes, -1, np.int64)
    right = np.full(max_nodes, -1, np.int64)
    leaf_label = np.full(max_nodes, -1, np.int64)

    idx = np.arange(n)
    scratch = np.empty(n, np.int64)
    cand = np.empty(d, np.int64)
    vals = np.empty(n, np.float64)

    stack_node = np.empty(max_nodes, np.int64)
    stack_start = np.empty(max_nodes, np.int64)
    stack_end = np.empty(max_nodes, np.int64)
    stack_depth = np.empty(max_nodes, np.int64)
    stack_node[0] = 0
    stack_start[0] = 0
    stack_end[0] = n
    stack_depth[0] = 0
    top = 1
    node_count = 1
    state = np.uint64(seed)
    m = n_candidates if n_candidates < d else d

    while top > 0:
        top -= 1
        node = stack_node[top]
        s = stack_start[top]
        e = stack_end[top]
        depth = stack_depth[top]
        cnt = e - s
        ones = 0
        for i in range(s, e):
            ones += y[idx[i]]
        zeros = cnt - ones
        if zeros == 0 or ones == 0 or depth >= max_depth or cnt < min_samples_split:
            leaf_label[node] = 1 if 2 * ones >= cnt else 0
            continue

        for j in range(d):
            cand[j] = j
        if m < d:
            for i in range(m):
                state, r = _splitmix64(state)
                j = i + np.int64(r % np.uint64(d - i))
                tmp = cand[i]
                cand[i] = cand[j]
                cand[j] = tmp

        best_impurity = np.inf
        best_f = -1
        best_thr = 0.0
        for ci in range(m):
            f = cand[ci]
            for i in range(cnt):
                vals[i] = X[idx[s + i], f]
            order = np.argsort(vals[:cnt])
            ones_left = 0
            for pos in range(cnt - 1):
                ones_left += y[idx[s + order[pos]]]
                lo = vals[order[pos]]
                hi = vals[order[pos + 1]]
                if lo < hi:
                    nl = pos + 1
                    nr = cnt - nl
                    ol = float(ones_left)
                    orr = float(ones - ones_left)
                    pl1 = ol / nl
                    pl0 = (nl - ol) / nl
                    pr1 = orr / nr
                    pr0 = (nr - orr) / nr
                    g = nl * (1.0 - pl1 * pl1 - pl0 * pl0) + nr * (1.0 - pr1 * pr1 - pr0 * pr0)
                    if g < best_impurity:
                        best_impurity = g
                        best_f = f
                        thr = 0.5 * (lo + hi)
                        if thr >= hi:
                            thr = lo
                        best_thr = thr

        if best_f < 0:
            leaf_label[node] = 1 if 2 * ones >= cnt else 0
            continue

        nl = 0
        for i in range(s, e):
            if X[idx[i], best_f] <= best_thr:
                scratch[nl] = idx[i]
                nl += 1
        nr = nl
        for i in range(s, e):
            if X[idx[i], best_f] > best_thr:
                scratch[nr] = idx[i]
                nr += 1
        for i in range(cnt):
            idx[s + i] = scratch[i]

        left_id = node_count
        right_id = node_count + 1
        node_count += 2
        feature[node] = best_f
        threshold[node] = best_thr
        left[node] = left_id
        right[node] = right_id
        mid = s + nl
        stack_node[top] = right_id
        stack_start[top] = mid
        stack_end[top] = e
        stack_depth[top] = depth + 1
        top += 1
        stack_node[top] = left_id
        stack_start[top] = s
        stack_end[top] = mid
        stack_depth[top] = depth + 1
        top += 1

    return (
        feature[:node_count],
        threshold[:node_count],
        left[:node_count],
        right[:node_count],
        leaf_label[:node_count],
    )


@njit(cache=True)
def _predict_tree(feature, threshold, left, right, leaf_label, X):
    n = X.shape[0]
    out = np.empty(n, np.int64)
    for i in range(n):
        node = 0
        while leaf_label[node] < 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = leaf_label[node]
    return out


def _resolve_max_features(max_features, d: int) -> int:
    if max_features is None:
        return d
    if max_features == "sqrt":
        return min(d, math.ceil(math.sqrt(d)))
    m = int(max_features)
    if m < 1:
        raise ValueError("max_features must be >= 1")
    return min(m, d)


class _Tree:
    __slots__ = ("feature", "threshold", "left", "right", "leaf_label")

    def __init__(self, feature, threshold, left, right, leaf_label):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.leaf_label = leaf_label

    def predict(self, X: np.ndarray) -> np.ndarray:
        return _predict_tree(self.feature, self.threshold, self.left, self.right, self.leaf_label, X)

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "leaf_label": self.leaf_label.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "_Tree":
        return cls(
            np.asarray(d["feature"], np.int64),
            np.asarray(d["threshold"], np.float64),
            np.asarray(d["left"], np.int64),
            np.asarray(d["right"], np.int64),
            np.asarray(d["leaf_label"], np.int64),
        )


class DecisionTreeClassifier:
    kind = "tree"

    def __init__(
        self,
        max_depth: int = 32,
        min_samples_split: int = 2,
        max_features=None,
        seed: int = 0,
    ):
        if max_depth < 1 or min_samples_split < 2:
            raise ValueError("max_depth must be >= 1 and min_samples_split >= 2")
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.seed = seed
        self._tree = None
        self._width = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "DecisionTreeClassifier":
        X, y = check_training(X, y)
        self._width = X.shape[1]
        m = _resolve_max_features(self.max_features, X.shape[1])
        arrays = _grow_tree(
            np.ascontiguousarray(X),
            y,
            self.max_depth,
            self.min_samples_split,
            m,
            np.uint64(self.seed),
        )
        self._tree = _Tree(*arrays)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if self._tree is None:
            raise ValueError("classifier is not fitted")
        X = check_predict(X, self._width)
        return self._tree.predict(np.ascontiguousarray(X))

    def hyperparameters(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "max_features": self.max_features,
            "seed": self.seed,
        }

    def parameters(self) -> dict:
        return {"width": self._width, "tree": self._tree.to_dict()}

    @classmethod
    def from_saved(cls, hyper: dict, params: dict) -> "DecisionTreeClassifier":
        clf = cls(**hyper)
        clf._width = params["width"]
        clf._tree = _Tree.from_dict(params["tree"])
        return clf


class RandomForestClassifier:
    kind = "rf"

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int = 32,
        min_samples_split: int = 2,
        max_features="sqrt",
        bootstrap: bool = True,
        seed: int = 0,
    ):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if max_depth < 1 or min_samples_split < 2:
            raise ValueError("max_depth must be >= 1 and min_samples_split >= 2")
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed
        self._trees: list[_Tree] = []
        self._width = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RandomForestClassifier":
        X, y = check_training(X, y)
        self._width = X.shape[1]
        n = X.shape[0]
        m = _resolve_max_features(self.max_features, X.shape[1])
        Xc = np.ascontiguousarray(X)
        children = np.random.SeedSequence(self.seed).spawn(self.n_trees)
        self._trees = []
        for child in children:
            states = child.generate_state(2, dtype=np.uint64)
            if self.bootstrap:
                rng = np.random.default_rng(states[0])
                sample = rng.integers(0, n, size=n)
                Xi = np.ascontiguousarray(Xc[sample])
                yi = y[sample]
            else:
                Xi, yi = Xc, y
            arrays = _grow_tree(Xi, yi, self.max_depth, self.min_samples_split, m, states[1])
            self._trees.append(_Tree(*arrays))
        return self

    def predict_votes(self, X: np.ndarray) -> np.ndarray:
        """Per-tree predictions, shape (n_trees, n_rows)."""
        if not self._trees:
            raise ValueError("classifier is not fitted")
        X = np.ascontiguousarray(check_predict(X, self._width))
        return np.stack([t.predict(X) for t in self._trees])

    def predict(self, X: np.ndarray) -> np.ndarray:
        votes = self.predict_votes(X)
        ones = votes.sum(axis=0)
        return (2 * ones >= votes.shape[0]).astype(np.int64)

    def hyperparameters(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "max_features": self.max_features,
            "bootstrap": self.bootstrap,
            "seed": self.seed,
        }

    def parameters(self) -> dict:
        return {"width": self._width, "trees": [t.to_dict() for t in self._trees]}

    @classmethod
    def from_saved(cls, hyper: dict, params: dict) -> "RandomForestClassifier":
        clf = cls(**hyper)
        clf._width = params["width"]
        clf._trees = [_Tree.from_dict(t) for t in params["trees"]]
        return clf
