"""Bundle of fitted feature artifacts plus a trained classifier.

``train`` saves the whole bundle (feature config, stopword list, TF-IDF
tables, normalization parameters, classifier) as one versioned JSON
document so ``predict`` can run on a raw CSV with nothing else on hand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .classifiers import make_classifier
from .classifiers.serialize import model_from_dict, model_to_dict
from .corpus import Dataset
from .errors import ModelFormatError, SchemaError
from .features import (
    FeatureConfig,
    FeatureMode,
    MinMaxParams,
    TfidfModel,
    apply_minmax,
    build_features,
    fit_minmax,
    fit_tfidf,
    make_embedder,
)
from .preprocess import StopwordList, bundled_stopwords

FORMAT_TAG = "bugtriage-pipeline"
FORMAT_VERSION = 1

_SEEDED_KINDS = {"svm", "rf"}


@dataclass
class PipelineModel:
    config: FeatureConfig
    stopwords: StopwordList
    tfidf: TfidfModel
    norm: MinMaxParams
    classifier: object


@dataclass
class PredictionResult:
    labels: list[int]
    extra_columns: list[str]
    extras: list[list[str]]


def classifier_params_from_args(args) -> dict:
    """Collect per-model hyperparameter flags that were actually given."""
    mapping = {
        "knn": {"knn_k": "k"},
        "rf": {"rf_trees": "n_trees", "rf_max_depth": "max_depth"},
        "svm": {"svm_c": "c", "svm_epochs": "epochs"},
        "lr": {"lr_step": "step", "lr_max_iter": "max_iter"},
        "nb": {},
    }
    params = {}
    for attr, name in mapping.get(args.model, {}).items():
        value = getattr(args, attr, None)
        if value is not None:
            params[name] = value
    return params


def train_pipeline(
    ds: Dataset,
    cfg: FeatureConfig,
    classifier: tuple[str, dict],
    stopwords: StopwordList | None = None,
    seed: int = 0,
    backend=None,
) -> PipelineModel:
    kind, params = classifier
    if stopwords is None:
        stopwords = bundled_stopwords()
    if backend is None:
        backend = make_embedder(cfg)
    tfidf = fit_tfidf(ds, cfg.freq_fields())
    matrix = build_features(ds, cfg, tfidf, backend, stopwords)
    norm = fit_minmax(matrix)
    params = dict(params)
    if kind in _SEEDED_KINDS:
        params.setdefault("seed", seed)
    clf = make_classifier(kind, **params)
    clf.fit(apply_minmax(norm, matrix).values, ds.labels())
    return PipelineModel(config=cfg, stopwords=stopwords, tfidf=tfidf, norm=norm, classifier=clf)


def predict_pipeline(model: PipelineModel, ds: Dataset, backend=None) -> PredictionResult:
    cfg = model.config
    if "intention" in cfg.freq_fields():
        missing = [r.id for r in ds if r.intention is None]
        if missing:
            raise SchemaError(
                f"model requires the intention column; missing for ids {missing[:5]}",
                column="intention",
            )
    if backend is None:
        backend = make_embedder(cfg)
    matrix = build_features(ds, cfg, model.tfidf, backend, model.stopwords)
    if backend.dim + len(cfg.freq_fields()) != len(model.norm.columns):
        raise ModelFormatError(
            f"embedding backend width {backend.dim} does not match the trained model"
        )
    X = apply_minmax(model.norm, matrix).values
    clf = model.classifier
    labels = [int(v) for v in clf.predict(X)]
    if clf.kind == "lr":
        pis = clf.predict_pi(X)
        return PredictionResult(labels=labels, extra_columns=["pi"], extras=[[repr(float(p))] for p in pis])
    if clf.kind == "nb":
        post = clf.predict_posteriors(X)
        return PredictionResult(
            labels=labels,
            extra_columns=["posterior_non_bug", "posterior_bug"],
            extras=[[repr(float(a)), repr(float(b))] for a, b in post],
        )
    return PredictionResult(labels=labels, extra_columns=[], extras=[[] for _ in labels])


def pipeline_to_dict(model: PipelineModel) -> dict:
    return {
        "format": FORMAT_TAG,
        "version": FORMAT_VERSION,
        "feature_config": {
            "mode": model.config.mode.value,
            "embedder": model.config.embedder,
            "embedding_dim": model.config.embedding_dim,
        },
        "stopwords": {"source": model.stopwords.source, "words": sorted(model.stopwords.words)},
        "tfidf": {
            "doc_count": model.tfidf.doc_count,
            "fields": list(model.tfidf.fields),
            "doc_freq": model.tfidf.doc_freq,
        },
        "minmax": {
            "columns": list(model.norm.columns),
            "mins": model.norm.mins.tolist(),
            "maxs": model.norm.maxs.tolist(),
        },
        "classifier": model_to_dict(model.classifier),
    }


def pipeline_from_dict(doc: dict) -> PipelineModel:
    if doc.get("format") != FORMAT_TAG:
        raise ModelFormatError(f"not a {FORMAT_TAG} document")
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported pipeline version {doc.get('version')!r}")
    fc = doc["feature_config"]
    cfg = FeatureConfig(
        mode=FeatureMode(fc["mode"]),
        embedder=fc["embedder"],
        embedding_dim=int(fc["embedding_dim"]),
    )
    sw = doc["stopwords"]
    stopwords = StopwordList(words=frozenset(sw["words"]), source=sw["source"])
    tf = doc["tfidf"]
    tfidf = TfidfModel(
        doc_count=int(tf["doc_count"]),
        doc_freq={f: {v: int(c) for v, c in table.items()} for f, table in tf["doc_freq"].items()},
        fields=tuple(tf["fields"]),
    )
    mm = doc["minmax"]
    norm = MinMaxParams(
        columns=tuple(mm["columns"]),
        mins=np.asarray(mm["mins"], dtype=np.float64),
        maxs=np.asarray(mm["maxs"], dtype=np.float64),
    )
    clf = model_from_dict(doc["classifier"])
    return PipelineModel(config=cfg, stopwords=stopwords, tfidf=tfidf, norm=norm, classifier=clf)


def save_pipeline(model: PipelineModel, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(pipeline_to_dict(model), f, sort_keys=True)
        f.write("\n")


def load_pipeline(path) -> PipelineModel:
    with open(path, encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"{path}: not valid JSON") from exc
    return pipeline_from_dict(doc)
