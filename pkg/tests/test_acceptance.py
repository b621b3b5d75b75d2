"""Acceptance suite: one test per release criterion, each printing a PASS
line with its measured margin. Run with ``pytest tests/test_acceptance.py -v -s``.

The headline experiment is the directional ablation: on synthetic corpora
whose (label, intention) conditionals follow the shipped apache spec, mean
ten-fold accuracy over ten seeds must order text < text+freq <
text+freq+intention for all five classifiers, with the intention step
adding at least five percentage points.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from bugtriage.classifiers import (
    DecisionTreeClassifier,
    GaussianNbClassifier,
    KnnClassifier,
    LinearSvmClassifier,
    RandomForestClassifier,
    lr_gradient,
    lr_loss,
)
from bugtriage.cli import main
from bugtriage.corpus import stratified_kfold
from bugtriage.evaluation import cross_validate, run_ablation
from bugtriage.features import FeatureConfig, FeatureMode
from bugtriage.metrics import confusion, metrics
from bugtriage.synth import generate_synthetic, load_synth_spec

from test_classifiers import brute_force_knn, separable_problem
from test_preprocess import load_porter_reference

REPO = Path(__file__).resolve().parents[1]
APACHE_SPEC = REPO / "specs" / "apache.json"


def _ok(name: str, detail: str = ""):
    suffix = f" ({detail})" if detail else ""
    print(f"\nACCEPTANCE {name}: PASS{suffix}")


def test_c01_metrics_oracle_exact_and_bounded():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    for _ in range(1000):
        n = int(rng.integers(1, 201))
        y_true = rng.integers(0, 2, size=n)
        y_pred = rng.integers(0, 2, size=n)
        cm = confusion(y_true, y_pred)
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
        assert (cm.tp, cm.tn, cm.fp, cm.fn) == (tp, tn, fp, fn)
        m = metrics(cm)
        assert m.accuracy == (tp + tn) / n
        if tp + fp > 0:
            assert m.precision == tp / (tp + fp)
        if tp + fn > 0:
            assert m.recall == tp / (tp + fn)
        if m.precision + m.recall > 0:
            assert min(m.precision, m.recall) - 1e-12 <= m.f_measure
            assert m.f_measure <= max(m.precision, m.recall) + 1e-12
            assert m.f_measure == 2 * m.precision * m.recall / (m.precision + m.recall)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _ok("metrics-oracle", f"1000 vectors in {elapsed:.2f}s")


def test_c02_knn_matches_exhaustive_search():
    rng = np.random.default_rng(202)
    datasets = 0
    while datasets < 50:
        n = int(rng.integers(12, 501))
        d = int(rng.integers(1, 21))
        X = rng.random((n, d))
        y = rng.integers(0, 2, size=n)
        y[0], y[1] = 0, 1
        queries = rng.random((8, d))
        for k in (1, 3, 5):
            clf = KnnClassifier(k=k).fit(X, y)
            got = clf.predict(queries).tolist()
            want = [brute_force_knn(X, y, q, k) for q in queries]
            assert got == want, f"n={n} d={d} k={k}"
        datasets += 1
    _ok("knn-oracle", "50 datasets, k in {1,3,5}, exact")


def test_c03_nb_hand_case_and_posterior_normalization():
    X = np.array([[0.0], [2.0], [1.0]])
    y = np.array([1, 1, 0])
    clf = GaussianNbClassifier(var_floor=1e-9).fit(X, y)
    joint_bug = (2 / 3) * (1 / math.sqrt(2 * math.pi))
    joint_non = (1 / 3) * (1 / math.sqrt(2 * math.pi * 1e-9))
    manual = joint_bug / (joint_bug + joint_non)
    post = clf.predict_posteriors(np.array([[1.0]]))
    assert abs(post[0, 1] - manual) < 1e-10

    rng = np.random.default_rng(303)
    Xr = rng.standard_normal((120, 6))
    yr = rng.integers(0, 2, size=120)
    yr[0], yr[1] = 0, 1
    model = GaussianNbClassifier().fit(Xr, yr)
    sums = model.predict_posteriors(rng.standard_normal((300, 6))).sum(axis=1)
    assert np.max(np.abs(sums - 1.0)) < 1e-12
    _ok("nb-oracle", f"hand case err {abs(post[0, 1] - manual):.1e}")


def test_c04_lr_gradient_vs_central_differences():
    rng = np.random.default_rng(404)
    step = 1e-5
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 30))
        d = int(rng.integers(1, 8))
        X = rng.standard_normal((n, d))
        y = rng.integers(0, 2, size=n)
        coeffs = rng.standard_normal(d + 1)
        l2 = float(rng.choice([0.0, 1e-4, 1e-2]))
        analytic = lr_gradient(coeffs, X, y, l2)
        numeric = np.zeros_like(coeffs)
        for j in range(d + 1):
            hi, lo = coeffs.copy(), coeffs.copy()
            hi[j] += step
            lo[j] -= step
            numeric[j] = (lr_loss(hi, X, y, l2) - lr_loss(lo, X, y, l2)) / (2 * step)
        rel = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(numeric), 1e-12)
        worst = max(worst, rel)
        assert rel < 1e-4
    _ok("lr-gradient", f"worst relative error {worst:.2e}")


def test_c05_svm_margins_on_separable_sets():
    rng = np.random.default_rng(505)
    worst_margin = np.inf
    for _ in range(20):
        X, y = separable_problem(rng, n=30, d=4, gap=0.15)
        clf = LinearSvmClassifier(c=1000.0, epochs=800, step=0.5, seed=1).fit(X, y)
        assert np.array_equal(clf.predict(X), y)
        margins = (2.0 * y - 1.0) * clf.decision_function(X)
        worst_margin = min(worst_margin, margins.min())
        assert margins.min() >= 1.0 - 0.05
    _ok("svm-margins", f"worst margin {worst_margin:.3f} >= 0.95")


def test_c06_rf_degenerate_and_bit_identical():
    rng = np.random.default_rng(606)
    X = rng.random((120, 8))
    y = ((X[:, 2] + 0.3 * rng.standard_normal(120)) > 0.5).astype(int)
    y[0], y[1] = 0, 1
    forest = RandomForestClassifier(n_trees=1, bootstrap=False, max_features=None, seed=7).fit(X, y)
    tree = DecisionTreeClassifier(seed=99).fit(X, y)
    Q = rng.random((80, 8))
    assert np.array_equal(forest.predict(Q), tree.predict(Q))

    a = RandomForestClassifier(n_trees=15, seed=3).fit(X, y)
    b = RandomForestClassifier(n_trees=15, seed=3).fit(X, y)
    for ta, tb in zip(a._trees, b._trees):
        assert np.array_equal(ta.feature, tb.feature)
        assert np.array_equal(ta.threshold, tb.threshold)
        assert np.array_equal(ta.left, tb.left)
        assert np.array_equal(ta.right, tb.right)
        assert np.array_equal(ta.leaf_label, tb.leaf_label)
    _ok("rf-degenerate", "forest == tree; refit bit-identical")


def test_c07_porter_reference_sample():
    pairs = load_porter_reference()
    assert len(pairs) >= 100
    from bugtriage.porter import stem

    mismatches = [(w, e, stem(w)) for w, e in pairs if stem(w) != e]
    assert mismatches == []
    _ok("porter-reference", f"{len(pairs)} pairs, 100% agreement")


def test_c08_cv_hygiene_zero_violations():
    spec = load_synth_spec(APACHE_SPEC)
    ds = generate_synthetic(spec, seed=11)
    plan = stratified_kfold(ds, 10, 17)
    held_out = {j: {ds[i].id for i in plan.fold_indices(j)} for j in range(10)}
    events = []
    cross_validate(
        ds,
        FeatureConfig(mode=FeatureMode.TEXT_FREQ_INTENTION, embedding_dim=32),
        ("knn", {}),
        k=10,
        seed=17,
        audit=lambda fold, stage, ids: events.append((fold, stage, set(ids))),
    )
    violations = 0
    seen = {}
    for fold, stage, ids in events:
        violations += len(ids & held_out[fold])
        seen.setdefault(fold, set()).add(stage)
    assert violations == 0
    assert all(seen[j] == {"tfidf", "minmax", "classifier"} for j in range(10))
    _ok("cv-hygiene", f"{len(events)} fit calls audited, 0 violations")


def test_c09_directional_ablation_over_ten_seeds():
    spec = load_synth_spec(APACHE_SPEC)
    seeds = list(range(1, 11))
    start = time.perf_counter()
    result = run_ablation({"apache": spec}, seeds, k=10)
    elapsed = time.perf_counter() - start
    assert elapsed < 600.0
    detail = []
    for kind in ("knn", "nb", "lr", "svm", "rf"):
        text = result.table[("apache", "text", kind)]
        tf = result.table[("apache", "text+freq", kind)]
        tfi = result.table[("apache", "text+freq+intention", kind)]
        assert tfi > tf > text, f"{kind}: {text:.3f} / {tf:.3f} / {tfi:.3f}"
        assert tfi - tf >= 0.05, f"{kind} intention increment {tfi - tf:.3f}"
        detail.append(f"{kind} {100 * text:.1f}<{100 * tf:.1f}<{100 * tfi:.1f}")
    _ok("directional-ablation", f"{elapsed:.0f}s; " + "; ".join(detail))


def test_c10_ablate_cli_reproducible(tmp_path):
    args = [
        "ablate", "--spec", str(APACHE_SPEC), "--classifiers", "knn,nb,svm",
        "--seeds", "2", "--k", "5", "--seed", "123", "--jobs", "1",
    ]
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    for name in ("results.jsonl", "ablation.txt"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    _ok("reproducibility", "ablate rerun byte-identical")
