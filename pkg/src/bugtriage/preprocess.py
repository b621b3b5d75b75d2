"""Summary-text preprocessing pipeline.

Four stages, applied in order: case normalization, tokenization (punctuation
becomes spaces, digit characters are deleted), stopword removal against a
bundled versioned list, and Porter stemming. "Punctuation" is closed over
all of Unicode: any character that is neither alphabetic nor a digit nor
whitespace. Tokens containing non-ASCII letters are dropped after
tokenization because the stemmer is defined over ASCII only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .porter import stem

_ASCII_ALPHA = re.compile(r"[a-z]+\Z")


@dataclass(frozen=True)
class StopwordList:
    """A fixed set of lowercase stopwords plus an identifier for provenance."""

    words: frozenset[str]
    source: str

    def __post_init__(self):
        for w in self.words:
            if not w or w != w.lower():
                raise ValueError(f"stopword entries must be lowercase and non-empty: {w!r}")

    def __contains__(self, token: str) -> bool:
        return token in self.words


def load_stopwords(path) -> StopwordList:
    """Read a one-word-per-line stopword file; '#' lines are comments."""
    words = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                words.append(line.lower())
    return StopwordList(words=frozenset(words), source=str(path))


@lru_cache(maxsize=1)
def bundled_stopwords() -> StopwordList:
    """The versioned list shipped with the package."""
    text = resources.files("bugtriage.resources").joinpath("stopwords_english.txt").read_text("utf-8")
    words = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    return StopwordList(words=frozenset(words), source="english-basic-1")


def normalize_case(text: str) -> str:
    """Lowercase every cased character; all other characters are unchanged."""
    return text.lower()


def tokenize(text: str) -> list[str]:
    """Replace punctuation with spaces, delete digits, split on whitespace."""
    chars = []
    for ch in text:
        if ch.isalpha():
            chars.append(ch)
        elif ch.isdigit():
            continue
        elif ch.isspace():
            chars.append(" ")
        else:
            chars.append(" ")
    return "".join(chars).split()


def remove_stopwords(tokens: list[str], stopwords: StopwordList) -> list[str]:
    """Order-preserving filter; expects lowercase tokens."""
    return [t for t in tokens if t not in stopwords]


def preprocess(text: str, stopwords: StopwordList | None = None) -> list[str]:
    """Full pipeline: lowercase, tokenize, drop non-ASCII tokens, remove
    stopwords, stem. Stems that collide with a stopword are filtered out so
    the output never contains a stopword.
    """
    if stopwords is None:
        stopwords = bundled_stopwords()
    tokens = tokenize(normalize_case(text))
    tokens = [t for t in tokens if _ASCII_ALPHA.match(t)]
    tokens = remove_stopwords(tokens, stopwords)
    return [s for t in tokens if (s := stem(t)) not in stopwords]
