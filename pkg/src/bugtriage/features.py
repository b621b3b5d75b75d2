"""Feature extraction: field-frequency scores fused with summary embeddings.

A report's feature row is the concatenation of a frequency block and a text
block. The frequency block holds one TF-IDF score per active categorical
field, in fixed column order product, component, reporter, severity,
intention. Because each field carries exactly one value per report, the
term-frequency factor is 1/1 and the score reduces to ln(D / (Dw + 1)),
where D is the training-set size and Dw counts training reports sharing the
value. Negative scores (Dw + 1 > D) are kept as computed. The text block is
a fixed-length vector for the preprocessed summary, produced either by the
deterministic hashing fallback or by the embedding sidecar. The fused matrix
is min-max normalized per column with parameters fitted on training rows
only; out-of-range values at apply time are clamped into [0, 1].
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import socket
from dataclasses import dataclass

import numpy as np

from .corpus import BugReport, Dataset, Intention
from .errors import BackendUnavailableError, ProtocolError
from .preprocess import StopwordList, preprocess

FREQ_COLUMN_ORDER = ("product", "component", "reporter", "severity", "intention")


class FeatureMode(enum.Enum):
    TEXT = "text"
    TEXT_FREQ = "text+freq"
    TEXT_FREQ_INTENTION = "text+freq+intention"


_FIELDS_BY_MODE = {
    FeatureMode.TEXT: (),
    FeatureMode.TEXT_FREQ: ("product", "component", "reporter", "severity"),
    FeatureMode.TEXT_FREQ_INTENTION: ("product", "component", "reporter", "severity", "intention"),
}


@dataclass(frozen=True)
class FeatureConfig:
    mode: FeatureMode = FeatureMode.TEXT_FREQ_INTENTION
    embedder: str = "fallback"
    embedding_dim: int = 64
    sidecar_addr: str | None = None

    def freq_fields(self) -> tuple[str, ...]:
        return _FIELDS_BY_MODE[self.mode]


def field_value(report: BugReport, field_name: str) -> str:
    """Categorical value of a report field; intention uses its enum string."""
    if field_name == "intention":
        if report.intention is None:
            raise ValueError(f"report {report.id} has no intention value")
        return report.intention.value
    if field_name not in FREQ_COLUMN_ORDER:
        raise ValueError(f"unknown frequency field {field_name!r}")
    return getattr(report, field_name)


@dataclass(frozen=True)
class TfidfModel:
    """Fitted document frequencies per categorical field."""

    doc_count: int
    doc_freq: dict[str, dict[str, int]]
    fields: tuple[str, ...]

    def score(self, field_name: str, value: str) -> float:
        dw = self.doc_freq.get(field_name, {}).get(value, 0)
        return math.log(self.doc_count / (dw + 1))


def fit_tfidf(train: Dataset, fields: tuple[str, ...]) -> TfidfModel:
    """Count document frequencies on the training set; D is its size."""
    if len(train) == 0:
        raise ValueError("cannot fit TF-IDF on an empty dataset")
    freq: dict[str, dict[str, int]] = {f: {} for f in fields}
    for r in train:
        for f in fields:
            v = field_value(r, f)
            freq[f][v] = freq[f].get(v, 0) + 1
    return TfidfModel(doc_count=len(train), doc_freq=freq, fields=tuple(fields))


def tfidf_score(model: TfidfModel, field_name: str, value: str) -> float:
    return model.score(field_name, value)


class HashingEmbedder:
    """Deterministic fallback summary vectorizer.

    Each token contributes a signed unit to one of ``dim`` buckets:
    with h = md5(utf-8 token), the bucket is the first 8 digest bytes
    (big-endian) mod dim and the sign is +1 when digest byte 8 is even,
    else -1. Repeated tokens contribute repeatedly. The summed vector is
    L2-normalized; an empty token sequence yields the zero vector.
    """

    kind = "fallback"

    def __init__(self, dim: int = 64):
        if dim < 1:
            raise ValueError("embedding dim must be >= 1")
        self.dim = dim

    @property
    def name(self) -> str:
        return f"fallback:dim={self.dim}"

    def embed(self, tokens: list[str]) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        for tok in tokens:
            digest = hashlib.md5(tok.encode("utf-8")).digest()
            bucket = int.from_bytes(digest[:8], "big") % self.dim
            sign = 1.0 if digest[8] % 2 == 0 else -1.0
            vec[bucket] += sign
        norm = np.linalg.norm(vec)
        if norm > 0:
            vec /= norm
        return vec

    def embed_batch(self, token_seqs: list[list[str]]) -> np.ndarray:
        return np.stack([self.embed(t) for t in token_seqs]) if token_seqs else np.zeros((0, self.dim))


class SidecarEmbedder:
    """Client for the TCP embedding sidecar (newline-delimited JSON frames).

    Connects and handshakes eagerly so the announced dimension is available
    before any batch is sent. One in-flight batch per connection.
    """

    kind = "sidecar"
    PROTOCOL_VERSION = 1

    def __init__(self, addr: str, timeout: float = 60.0):
        host, _, port = addr.rpartition(":")
        if not host or not port.isdigit():
            raise ValueError(f"sidecar address must be host:port, got {addr!r}")
        self.addr = addr
        self._timeout = timeout
        try:
            self._sock = socket.create_connection((host, int(port)), timeout=timeout)
        except OSError as exc:
            raise BackendUnavailableError(addr, str(exc)) from exc
        self._reader = self._sock.makefile("r", encoding="utf-8", newline="\n")
        welcome = self._roundtrip({"type": "hello", "version": self.PROTOCOL_VERSION})
        if welcome.get("type") != "welcome" or welcome.get("version") != self.PROTOCOL_VERSION:
            raise ProtocolError(f"unexpected handshake reply: {welcome}")
        self.dim = int(welcome["dim"])
        self.model = str(welcome.get("model", "unknown"))
        self.max_batch = int(welcome.get("max_batch", 256))

    @property
    def name(self) -> str:
        return f"sidecar:{self.model}:dim={self.dim}"

    def _send(self, frame: dict) -> None:
        self._sock.sendall((json.dumps(frame) + "\n").encode("utf-8"))

    def _recv(self) -> dict:
        line = self._reader.readline()
        if not line:
            raise ProtocolError(f"sidecar at {self.addr} closed the connection")
        try:
            frame = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"sidecar sent a malformed frame: {line!r}") from exc
        if isinstance(frame, dict) and frame.get("type") == "error":
            raise ProtocolError(f"sidecar error: {frame.get('error')}")
        return frame

    def _roundtrip(self, frame: dict) -> dict:
        try:
            self._send(frame)
            return self._recv()
        except OSError as exc:
            raise BackendUnavailableError(self.addr, str(exc)) from exc

    def embed(self, tokens: list[str]) -> np.ndarray:
        return self.embed_batch([tokens])[0]

    def embed_batch(self, token_seqs: list[list[str]]) -> np.ndarray:
        out = np.zeros((len(token_seqs), self.dim), dtype=np.float64)
        for start in range(0, len(token_seqs), self.max_batch):
            chunk = token_seqs[start : start + self.max_batch]
            items = [{"id": str(start + i), "text": " ".join(t)} for i, t in enumerate(chunk)]
            reply = self._roundtrip({"type": "embed", "items": items})
            if reply.get("type") == "partial_reject":
                raise ProtocolError(f"sidecar rejected ids {reply.get('rejected')}")
            if reply.get("type") != "vectors":
                raise ProtocolError(f"expected vectors frame, got {reply.get('type')!r}")
            got = {str(item["id"]): item for item in reply.get("items", [])}
            for i in range(len(chunk)):
                key = str(start + i)
                if key not in got:
                    raise ProtocolError(f"sidecar reply is missing id {key}")
                vec = np.asarray(got[key]["vector"], dtype=np.float64)
                if vec.shape != (self.dim,):
                    raise ProtocolError(
                        f"sidecar vector for id {key} has dim {vec.shape[0]}, announced {self.dim}"
                    )
                if not np.all(np.isfinite(vec)):
                    raise ProtocolError(f"sidecar vector for id {key} has non-finite entries")
                out[start + i] = vec
        return out

    def close(self) -> None:
        try:
            self._reader.close()
            self._sock.close()
        except OSError:
            pass


def make_embedder(cfg: FeatureConfig):
    if cfg.embedder == "fallback":
        return HashingEmbedder(dim=cfg.embedding_dim)
    if cfg.embedder == "sidecar":
        if not cfg.sidecar_addr:
            raise ValueError("sidecar embedder selected but no sidecar address given")
        return SidecarEmbedder(cfg.sidecar_addr)
    raise ValueError(f"unknown embedder {cfg.embedder!r}")


def embed(tokens: list[str], backend) -> np.ndarray:
    """Fixed-length vector for one preprocessed token sequence."""
    return backend.embed(tokens)


@dataclass(frozen=True)
class FeatureMatrix:
    values: np.ndarray
    columns: tuple[str, ...]
    row_ids: tuple[str, ...]

    def __post_init__(self):
        if self.values.shape != (len(self.row_ids), len(self.columns)):
            raise ValueError(
                f"matrix shape {self.values.shape} does not match "
                f"{len(self.row_ids)} rows x {len(self.columns)} columns"
            )

    @property
    def n_freq_columns(self) -> int:
        return sum(1 for c in self.columns if c.startswith("tfidf:"))

    def freq_block(self) -> np.ndarray:
        return self.values[:, : self.n_freq_columns]

    def embed_block(self) -> np.ndarray:
        return self.values[:, self.n_freq_columns :]


def build_features(
    ds: Dataset,
    cfg: FeatureConfig,
    tfidf: TfidfModel,
    backend,
    stopwords: StopwordList | None = None,
    embeddings: np.ndarray | None = None,
) -> FeatureMatrix:
    """Fuse the frequency block and the text block, rows in dataset order.

    ``embeddings`` may carry a precomputed text block (row-aligned with the
    dataset); embeddings have no fitted state, so reusing them across folds
    is safe.
    """
    fields = cfg.freq_fields()
    n = len(ds)
    freq = np.empty((n, len(fields)), dtype=np.float64)
    for i, r in enumerate(ds):
        for j, f in enumerate(fields):
            freq[i, j] = tfidf.score(f, field_value(r, f))
    if embeddings is None:
        token_seqs = [preprocess(r.summary, stopwords) for r in ds]
        embeddings = backend.embed_batch(token_seqs)
    emb = np.asarray(embeddings, dtype=np.float64)
    if emb.shape[0] != n:
        raise ValueError(f"embedding block has {emb.shape[0]} rows, dataset has {n}")
    columns = tuple(f"tfidf:{f}" for f in fields) + tuple(
        f"embed:{i:04d}" for i in range(emb.shape[1])
    )
    values = np.hstack([freq, emb]) if n else np.zeros((0, len(columns)))
    return FeatureMatrix(values=values, columns=columns, row_ids=tuple(r.id for r in ds))


@dataclass(frozen=True)
class MinMaxParams:
    columns: tuple[str, ...]
    mins: np.ndarray
    maxs: np.ndarray


def fit_minmax(train: FeatureMatrix) -> MinMaxParams:
    if train.values.shape[0] == 0:
        raise ValueError("cannot fit normalization on an empty matrix")
    return MinMaxParams(
        columns=train.columns,
        mins=train.values.min(axis=0),
        maxs=train.values.max(axis=0),
    )


def apply_minmax(params: MinMaxParams, m: FeatureMatrix) -> FeatureMatrix:
    """Scale columns to [0, 1]; constant columns map to 0, out-of-range
    values are clamped."""
    if params.columns != m.columns:
        raise ValueError("normalization parameters were fitted on different columns")
    span = params.maxs - params.mins
    safe = np.where(span > 0, span, 1.0)
    scaled = (m.values - params.mins) / safe
    scaled = np.where(span > 0, scaled, 0.0)
    scaled = np.clip(scaled, 0.0, 1.0)
    return FeatureMatrix(values=scaled, columns=m.columns, row_ids=m.row_ids)


def matrix_to_csv(m: FeatureMatrix, path) -> None:
    """Export for inspection: header is the column metadata, first column id."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("id," + ",".join(m.columns) + "\n")
        for rid, row in zip(m.row_ids, m.values):
            f.write(rid + "," + ",".join(repr(v) for v in row) + "\n")
