"""Build the fused feature matrix for a small corpus, step by step.

Shows the per-field TF-IDF scores, the hashing text vectors, fusion into
one matrix, and min-max normalization fitted on a training subset only.
"""

from pathlib import Path

import numpy as np

from bugtriage.corpus import load_csv, train_test_split
from bugtriage.features import (
    FeatureConfig,
    FeatureMode,
    HashingEmbedder,
    apply_minmax,
    build_features,
    fit_minmax,
    fit_tfidf,
)

REPO = Path(__file__).resolve().parents[1]
ds = load_csv(REPO / "data" / "apache.csv")
train, test = train_test_split(ds, 0.2, seed=0)
print(f"{len(train)} training / {len(test)} held-out reports\n")

cfg = FeatureConfig(mode=FeatureMode.TEXT_FREQ_INTENTION, embedding_dim=16)
tfidf = fit_tfidf(train, cfg.freq_fields())

print("document frequencies for 'severity' (D = %d):" % tfidf.doc_count)
for value, dw in sorted(tfidf.doc_freq["severity"].items()):
    print(f"  {value:<12} Dw={dw:<4} score=ln(D/(Dw+1))={tfidf.score('severity', value):+.4f}")
print(f"  {'<unseen>':<12} Dw=0    score={tfidf.score('severity', 'no-such-value'):+.4f}\n")

backend = HashingEmbedder(dim=cfg.embedding_dim)
train_m = build_features(train, cfg, tfidf, backend)
print(f"fused training matrix: {train_m.values.shape[0]} x {train_m.values.shape[1]}")
print(f"frequency block columns: {train_m.columns[: train_m.n_freq_columns]}")
print(f"first text column: {train_m.columns[train_m.n_freq_columns]}\n")

norm = fit_minmax(train_m)
train_n = apply_minmax(norm, train_m)
test_n = apply_minmax(norm, build_features(test, cfg, tfidf, backend))
print(f"normalized training range: [{train_n.values.min():.3f}, {train_n.values.max():.3f}]")
print(f"held-out range after clamping: [{test_n.values.min():.3f}, {test_n.values.max():.3f}]")
print(f"column-wise training minima all zero: {bool(np.all(train_n.values.min(axis=0) == 0))}")
