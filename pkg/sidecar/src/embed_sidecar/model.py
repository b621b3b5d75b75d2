"""Embedding models served by the sidecar.

A model exposes ``dim``, ``model_id`` and ``encode(texts) -> (n, dim)``:
tokenize each text with the model's own tokenizer, take the hidden states
of the penultimate encoder layer, and mean-pool them over non-padding
positions. An empty text maps to the zero vector.

``fixture-tiny`` is a small deterministic encoder built from seeded random
weights: no downloads, bit-identical across processes, suitable for tests
and CI. ``hf:<name>`` loads a pretrained transformer via the optional
``hf`` extra.
"""

from __future__ import annotations

import hashlib

import numpy as np

FIXTURE_ID = "fixture-tiny-v1"
_FIXTURE_SEED = 0x5EEDED
_FIXTURE_VOCAB = 512
_FIXTURE_DIM = 32
_FIXTURE_LAYERS = 3


class FixtureModel:
    """Deterministic 3-layer tanh encoder over hashed whitespace tokens."""

    def __init__(self):
        rng = np.random.default_rng(_FIXTURE_SEED)
        scale = 1.0 / np.sqrt(_FIXTURE_DIM)
        self._embeddings = rng.standard_normal((_FIXTURE_VOCAB, _FIXTURE_DIM)) * scale
        self._weights = [
            rng.standard_normal((_FIXTURE_DIM, _FIXTURE_DIM)) * scale
            for _ in range(_FIXTURE_LAYERS)
        ]
        self._biases = [rng.standard_normal(_FIXTURE_DIM) * 0.1 for _ in range(_FIXTURE_LAYERS)]

    @property
    def dim(self) -> int:
        return _FIXTURE_DIM

    @property
    def model_id(self) -> str:
        return FIXTURE_ID

    @staticmethod
    def tokenize(text: str) -> list[int]:
        ids = []
        for tok in text.split():
            digest = hashlib.md5(tok.encode("utf-8")).digest()
            ids.append(int.from_bytes(digest[:8], "big") % _FIXTURE_VOCAB)
        return ids

    def encode(self, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), _FIXTURE_DIM), dtype=np.float64)
        for i, text in enumerate(texts):
            ids = self.tokenize(text)
            if not ids:
                continue
            hidden = self._embeddings[ids]
            states = [hidden]
            for W, b in zip(self._weights, self._biases):
                hidden = np.tanh(hidden @ W + b)
                states.append(hidden)
            penultimate = states[-2]
            out[i] = penultimate.mean(axis=0)
        return out


class HuggingFaceModel:
    """Pretrained transformer encoder; penultimate hidden layer, mask-aware
    mean pooling. Requires the ``hf`` extra."""

    def __init__(self, name: str):
        import torch
        from transformers import AutoModel, AutoTokenizer

        self._torch = torch
        self._tokenizer = AutoTokenizer.from_pretrained(name)
        self._model = AutoModel.from_pretrained(name, output_hidden_states=True)
        self._model.eval()
        self._dim = int(self._model.config.hidden_size)
        self._name = name

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def model_id(self) -> str:
        return self._name

    def encode(self, texts: list[str]) -> np.ndarray:
        torch = self._torch
        out = np.zeros((len(texts), self._dim), dtype=np.float64)
        nonempty = [(i, t) for i, t in enumerate(texts) if t.strip()]
        if not nonempty:
            return out
        batch = self._tokenizer(
            [t for _, t in nonempty], padding=True, truncation=True, return_tensors="pt"
        )
        with torch.no_grad():
            states = self._model(**batch).hidden_states[-2]
        mask = batch["attention_mask"].unsqueeze(-1).to(states.dtype)
        pooled = (states * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1.0)
        for row, (i, _) in enumerate(nonempty):
            out[i] = pooled[row].numpy()
        return out


def load_model(identifier: str):
    if identifier == "fixture-tiny" or identifier == FIXTURE_ID:
        return FixtureModel()
    if identifier.startswith("hf:"):
        return HuggingFaceModel(identifier[3:])
    raise ValueError(f"unknown model identifier {identifier!r}; use fixture-tiny or hf:<name>")
