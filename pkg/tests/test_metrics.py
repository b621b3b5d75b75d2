import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bugtriage.metrics import ConfusionMatrix, confusion, mean_metrics, metrics


def brute_force_counts(y_true, y_pred):
    """Independent oracle: count each (truth, prediction) pair one at a time."""
    tp = tn = fp = fn = 0
    for t, p in zip(y_true, y_pred):
        if t == 1 and p == 1:
            tp += 1
        elif t == 0 and p == 0:
            tn += 1
        elif t == 0 and p == 1:
            fp += 1
        else:
            fn += 1
    return tp, tn, fp, fn


class TestConfusion:
    def test_mixed_example(self):
        cm = confusion([1, 1, 0, 0], [1, 0, 1, 0])
        assert (cm.tp, cm.fn, cm.fp, cm.tn) == (1, 1, 1, 1)

    def test_perfect_predictions(self):
        cm = confusion([1, 0, 1], [1, 0, 1])
        assert cm.fp == 0 and cm.fn == 0

    def test_empty(self):
        cm = confusion([], [])
        assert (cm.tp, cm.tn, cm.fp, cm.fn) == (0, 0, 0, 0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            confusion([1], [1, 0])

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            ConfusionMatrix(tp=-1, tn=0, fp=0, fn=0)


class TestMetrics:
    def test_balanced_example(self):
        m = metrics(ConfusionMatrix(tp=9, tn=9, fp=1, fn=1))
        assert m.accuracy == pytest.approx(0.9)
        assert m.precision == pytest.approx(0.9)
        assert m.recall == pytest.approx(0.9)
        assert m.f_measure == pytest.approx(0.9)

    def test_zero_denominator_precision_flagged(self):
        m = metrics(ConfusionMatrix(tp=0, tn=5, fp=0, fn=2))
        assert m.precision == 0.0
        assert "precision" in m.undefined

    def test_hand_computed_f_measure(self):
        m = metrics(ConfusionMatrix(tp=8, tn=0, fp=2, fn=4))
        assert m.precision == pytest.approx(0.8)
        assert m.recall == pytest.approx(2 / 3)
        assert m.f_measure == pytest.approx(2 * (0.8 * 2 / 3) / (0.8 + 2 / 3))
        assert m.f_measure == pytest.approx(0.7273, abs=5e-5)

    def test_empty_matrix_rejected(self):
        with pytest.raises(ValueError):
            metrics(ConfusionMatrix(tp=0, tn=0, fp=0, fn=0))

    def test_mean_metrics_is_arithmetic(self):
        a = metrics(ConfusionMatrix(tp=1, tn=1, fp=0, fn=0))
        b = metrics(ConfusionMatrix(tp=1, tn=0, fp=1, fn=0))
        m = mean_metrics([a, b])
        assert m.accuracy == pytest.approx((a.accuracy + b.accuracy) / 2)

    @settings(max_examples=150, deadline=None)
    @given(
        labels=st.lists(
            st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=200
        )
    )
    def test_matches_brute_force_and_harmonic_bound(self, labels):
        y_true = [t for t, _ in labels]
        y_pred = [p for _, p in labels]
        cm = confusion(y_true, y_pred)
        assert (cm.tp, cm.tn, cm.fp, cm.fn) == brute_force_counts(y_true, y_pred)
        m = metrics(cm)
        total = len(labels)
        assert m.accuracy == (cm.tp + cm.tn) / total
        if m.precision + m.recall > 0:
            assert min(m.precision, m.recall) - 1e-12 <= m.f_measure
            assert m.f_measure <= max(m.precision, m.recall) + 1e-12

    def test_majority_class_predictor_accuracy_is_majority_fraction(self):
        rng = np.random.default_rng(0)
        y = (rng.random(97) > 0.37).astype(int)
        cm = confusion(y, np.ones_like(y))
        m = metrics(cm)
        assert m.accuracy == pytest.approx(y.mean())
