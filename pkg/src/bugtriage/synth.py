"""Synthetic labeled corpora for end-to-end experiments.

A generator spec fixes the corpus size, the bug fraction, the conditional
intention distribution per label, and per-label sampling weights for the
summary vocabulary and each categorical field. Cell counts are obtained by
half-up rounding, so a spec whose fractions are exact count ratios
reproduces those counts exactly. Summaries are unigram samples from the
label's token distribution; the bug and non-bug vocabularies overlap
partially so summary text carries real but imperfect signal.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from .corpus import BugReport, Dataset, Intention, Label


@dataclass(frozen=True)
class WeightedValues:
    values: tuple[str, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if not self.values or len(self.values) != len(self.weights):
            raise ValueError("need matching, non-empty values and weights")
        if any(w < 0 for w in self.weights) or sum(self.weights) <= 0:
            raise ValueError("weights must be non-negative with a positive sum")

    def probabilities(self) -> np.ndarray:
        w = np.asarray(self.weights, dtype=np.float64)
        return w / w.sum()

    @classmethod
    def from_mapping(cls, mapping: dict) -> "WeightedValues":
        items = list(mapping.items())
        return cls(values=tuple(k for k, _ in items), weights=tuple(float(v) for _, v in items))


@dataclass(frozen=True)
class SynthSpec:
    name: str
    total: int
    bug_fraction: float
    explanation_given_bug: float
    explanation_given_nonbug: float
    summary_length: tuple[int, int]
    bug_tokens: WeightedValues
    nonbug_tokens: WeightedValues
    # field name -> label value ("bug"/"non-bug") -> WeightedValues
    fields: dict[str, dict[str, WeightedValues]]
    seed: int = 0

    def __post_init__(self):
        if self.total < 1:
            raise ValueError("total must be >= 1")
        for p in (self.bug_fraction, self.explanation_given_bug, self.explanation_given_nonbug):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} out of [0, 1]")
        lo, hi = self.summary_length
        if lo < 1 or hi < lo:
            raise ValueError("summary_length must satisfy 1 <= min <= max")
        for f in ("product", "component", "reporter", "severity"):
            if f not in self.fields:
                raise ValueError(f"spec is missing field distribution for {f!r}")
            for lb in ("bug", "non-bug"):
                if lb not in self.fields[f]:
                    raise ValueError(f"field {f!r} is missing the {lb!r} distribution")


def load_synth_spec(path) -> SynthSpec:
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    return SynthSpec(
        name=doc["name"],
        total=int(doc["total"]),
        bug_fraction=float(doc["bug_fraction"]),
        explanation_given_bug=float(doc["explanation_given_bug"]),
        explanation_given_nonbug=float(doc["explanation_given_nonbug"]),
        summary_length=(int(doc["summary_length"][0]), int(doc["summary_length"][1])),
        bug_tokens=WeightedValues.from_mapping(doc["bug_tokens"]),
        nonbug_tokens=WeightedValues.from_mapping(doc["nonbug_tokens"]),
        fields={
            f: {lb: WeightedValues.from_mapping(m) for lb, m in per_label.items()}
            for f, per_label in doc["fields"].items()
        },
        seed=int(doc.get("seed", 0)),
    )


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def generate_synthetic(spec: SynthSpec, seed: int | None = None) -> Dataset:
    """Sample a labeled dataset; pure function of (spec, seed).

    Joint (label, intention) counts are fixed by rounding, not sampled, so
    they match the spec's conditionals exactly up to rounding.
    """
    if seed is not None:
        spec = dataclasses.replace(spec, seed=seed)
    rng = np.random.default_rng(spec.seed)
    n_bug = _round_half_up(spec.total * spec.bug_fraction)
    n_nonbug = spec.total - n_bug
    cells = [
        (Label.BUG, Intention.EXPLANATION, _round_half_up(n_bug * spec.explanation_given_bug)),
        (Label.BUG, Intention.SUGGESTION, 0),
        (Label.NONBUG, Intention.EXPLANATION, _round_half_up(n_nonbug * spec.explanation_given_nonbug)),
        (Label.NONBUG, Intention.SUGGESTION, 0),
    ]
    cells[1] = (Label.BUG, Intention.SUGGESTION, n_bug - cells[0][2])
    cells[3] = (Label.NONBUG, Intention.SUGGESTION, n_nonbug - cells[2][2])

    lo, hi = spec.summary_length
    drafts = []
    for label, intention, count in cells:
        tokens = spec.bug_tokens if label is Label.BUG else spec.nonbug_tokens
        token_p = tokens.probabilities()
        field_dists = {
            f: (per_label[label.value].values, per_label[label.value].probabilities())
            for f, per_label in spec.fields.items()
        }
        for _ in range(count):
            length = int(rng.integers(lo, hi + 1))
            words = rng.choice(len(tokens.values), size=length, p=token_p)
            summary = " ".join(tokens.values[w] for w in words)
            picked = {
                f: values[int(rng.choice(len(values), p=p))] for f, (values, p) in field_dists.items()
            }
            drafts.append((label, intention, summary, picked))

    order = rng.permutation(len(drafts))
    reports = []
    for i, j in enumerate(order):
        label, intention, summary, picked = drafts[j]
        reports.append(
            BugReport(
                id=f"{spec.name}-{i + 1:05d}",
                product=picked["product"],
                component=picked["component"],
                reporter=picked["reporter"],
                severity=picked["severity"],
                summary=summary,
                intention=intention,
                label=label,
            )
        )
    return Dataset(reports=tuple(reports), source=f"synthetic:{spec.name}:seed={spec.seed}")
