"""Stratified ten-fold cross-validation of one configuration.

Every fitted artifact (TF-IDF, normalization, classifier) is refitted per
fold on the nine training folds only; the audit hook below prints what each
fit call saw so the fold hygiene is visible.
"""

from pathlib import Path

from bugtriage.corpus import load_csv
from bugtriage.evaluation import cross_validate
from bugtriage.features import FeatureConfig, FeatureMode

REPO = Path(__file__).resolve().parents[1]
ds = load_csv(REPO / "data" / "apache.csv")

fit_sizes = {}
result = cross_validate(
    ds,
    FeatureConfig(mode=FeatureMode.TEXT_FREQ_INTENTION, embedding_dim=64),
    ("rf", {"n_trees": 50}),
    k=10,
    seed=0,
    audit=lambda fold, stage, ids: fit_sizes.setdefault(fold, {}).update({stage: len(ids)}),
)

print(f"{'fold':<6}{'train rows seen':>16}{'accuracy':>10}{'f-measure':>11}")
for fo in result.folds:
    seen = fit_sizes[fo.fold]["classifier"]
    print(f"{fo.fold:<6}{seen:>16}{fo.scores.accuracy:>10.3f}{fo.scores.f_measure:>11.3f}")
m = result.mean
print(f"{'mean':<6}{'':>16}{m.accuracy:>10.3f}{m.f_measure:>11.3f}")
print(f"\nconfig: {result.config}")
