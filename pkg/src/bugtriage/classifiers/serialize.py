"""Versioned JSON save/load for trained classifiers.

Layout: ``{"format": "bugtriage-model", "version": 1, "kind": ...,
"hyperparameters": {...}, "parameters": {...}}``. Floats round-trip exactly
through JSON's repr encoding.
"""

from __future__ import annotations

import json

from ..errors import ModelFormatError

FORMAT_TAG = "bugtriage-model"
FORMAT_VERSION = 1


def model_to_dict(clf) -> dict:
    return {
        "format": FORMAT_TAG,
        "version": FORMAT_VERSION,
        "kind": clf.kind,
        "hyperparameters": clf.hyperparameters(),
        "parameters": clf.parameters(),
    }


def model_from_dict(doc: dict):
    from . import CLASSIFIER_KINDS
    from .forest import DecisionTreeClassifier

    if doc.get("format") != FORMAT_TAG:
        raise ModelFormatError(f"not a {FORMAT_TAG} document")
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model version {doc.get('version')!r}")
    kinds = dict(CLASSIFIER_KINDS, tree=DecisionTreeClassifier)
    kind = doc.get("kind")
    if kind not in kinds:
        raise ModelFormatError(f"unknown classifier kind {kind!r}")
    return kinds[kind].from_saved(doc["hyperparameters"], doc["parameters"])


def save_model(clf, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(model_to_dict(clf), f, sort_keys=True)
        f.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"{path}: not valid JSON") from exc
    return model_from_dict(doc)
