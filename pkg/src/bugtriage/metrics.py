"""Confusion counts and the four derived classification metrics.

Bug is the positive class. When a metric's denominator is zero it is
reported as 0.0 and its name is recorded in ``Metrics.undefined``; fold
averaging never skips folds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f_measure: float
    undefined: frozenset[str] = frozenset()


def confusion(y_true, y_pred) -> ConfusionMatrix:
    """Exact counts with bug (1) as positive; inputs are 0/1 label vectors."""
    t = np.asarray(y_true, dtype=np.int64)
    p = np.asarray(y_pred, dtype=np.int64)
    if t.shape != p.shape or t.ndim != 1:
        raise ValueError(f"label vectors must be 1-d and equal length, got {t.shape} vs {p.shape}")
    for v in (t, p):
        if v.size and not np.isin(v, (0, 1)).all():
            raise ValueError("labels must be 0 (non-bug) or 1 (bug)")
    return ConfusionMatrix(
        tp=int(np.sum((t == 1) & (p == 1))),
        tn=int(np.sum((t == 0) & (p == 0))),
        fp=int(np.sum((t == 0) & (p == 1))),
        fn=int(np.sum((t == 1) & (p == 0))),
    )


def metrics(cm: ConfusionMatrix) -> Metrics:
    """Accuracy, precision, recall and F-measure from one confusion matrix."""
    if cm.total == 0:
        raise ValueError("cannot compute metrics for an empty confusion matrix")
    undefined = set()
    accuracy = (cm.tp + cm.tn) / cm.total
    if cm.tp + cm.fp > 0:
        precision = cm.tp / (cm.tp + cm.fp)
    else:
        precision = 0.0
        undefined.add("precision")
    if cm.tp + cm.fn > 0:
        recall = cm.tp / (cm.tp + cm.fn)
    else:
        recall = 0.0
        undefined.add("recall")
    if precision + recall > 0:
        f_measure = 2.0 * precision * recall / (precision + recall)
    else:
        f_measure = 0.0
        undefined.add("f_measure")
    return Metrics(
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f_measure=f_measure,
        undefined=frozenset(undefined),
    )


def mean_metrics(per_fold: list[Metrics]) -> Metrics:
    """Arithmetic mean per metric; undefined flags are unioned."""
    if not per_fold:
        raise ValueError("no fold metrics to average")
    n = len(per_fold)
    return Metrics(
        accuracy=sum(m.accuracy for m in per_fold) / n,
        precision=sum(m.precision for m in per_fold) / n,
        recall=sum(m.recall for m in per_fold) / n,
        f_measure=sum(m.f_measure for m in per_fold) / n,
        undefined=frozenset().union(*(m.undefined for m in per_fold)),
    )
