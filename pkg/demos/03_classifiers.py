"""Train all five classifiers on an 8:2 split and compare their metrics."""

from pathlib import Path

from bugtriage.corpus import load_csv, train_test_split
from bugtriage.features import FeatureConfig, FeatureMode, apply_minmax, build_features, fit_minmax, fit_tfidf, make_embedder
from bugtriage.classifiers import make_classifier
from bugtriage.metrics import confusion, metrics

REPO = Path(__file__).resolve().parents[1]
ds = load_csv(REPO / "data" / "apache.csv")
train, test = train_test_split(ds, 0.2, seed=7)

cfg = FeatureConfig(mode=FeatureMode.TEXT_FREQ_INTENTION, embedding_dim=64)
backend = make_embedder(cfg)
tfidf = fit_tfidf(train, cfg.freq_fields())
norm = fit_minmax(build_features(train, cfg, tfidf, backend))
X_train = apply_minmax(norm, build_features(train, cfg, tfidf, backend)).values
X_test = apply_minmax(norm, build_features(test, cfg, tfidf, backend)).values
y_train, y_test = train.labels(), test.labels()

print(f"{'model':<6}{'accuracy':>10}{'precision':>11}{'recall':>9}{'f-measure':>11}")
for kind in ("knn", "nb", "lr", "svm", "rf"):
    params = {"seed": 0} if kind in ("svm", "rf") else {}
    clf = make_classifier(kind, **params).fit(X_train, y_train)
    m = metrics(confusion(y_test, clf.predict(X_test)))
    print(f"{kind:<6}{m.accuracy:>10.3f}{m.precision:>11.3f}{m.recall:>9.3f}{m.f_measure:>11.3f}")
