"""Labeled bug-report datasets: loading, validation, statistics, partitioning.

The on-disk format is a UTF-8 CSV with header
``id,product,component,reporter,severity,summary,intention,label`` where
intention is ``explanation`` or ``suggestion`` and label is ``bug`` or
``non-bug`` (both parsed case-insensitively). The annotation variant used
for freshly fetched, not-yet-labeled reports drops the last two columns.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DatasetError,
    InfeasibleStratificationError,
    RowParseError,
    SchemaError,
)

LABELED_COLUMNS = ("id", "product", "component", "reporter", "severity", "summary", "intention", "label")
ANNOTATION_COLUMNS = LABELED_COLUMNS[:-2]
PREDICTION_COLUMNS = LABELED_COLUMNS[:-1]

CATEGORICAL_FIELDS = ("product", "component", "reporter", "severity")


class Intention(enum.Enum):
    EXPLANATION = "explanation"
    SUGGESTION = "suggestion"


class Label(enum.Enum):
    BUG = "bug"
    NONBUG = "non-bug"


def _parse_enum(kind, raw: str, row: int):
    try:
        return kind(raw.strip().lower())
    except ValueError:
        allowed = "/".join(m.value for m in kind)
        raise RowParseError(f"{kind.__name__.lower()} must be one of {allowed}, got {raw!r}", row=row) from None


@dataclass(frozen=True)
class BugReport:
    """One report. ``intention`` and ``label`` are None for unlabeled
    (fetched / to-be-annotated) reports."""

    id: str
    product: str
    component: str
    reporter: str
    severity: str
    summary: str
    intention: Intention | None
    label: Label | None


@dataclass(frozen=True)
class Dataset:
    reports: tuple[BugReport, ...]
    source: str = ""

    def __len__(self) -> int:
        return len(self.reports)

    def __iter__(self) -> Iterator[BugReport]:
        return iter(self.reports)

    def __getitem__(self, i: int) -> BugReport:
        return self.reports[i]

    def labels(self) -> np.ndarray:
        """Label vector with bug=1, non-bug=0; requires a fully labeled dataset."""
        out = np.empty(len(self.reports), dtype=np.int64)
        for i, r in enumerate(self.reports):
            if r.label is None:
                raise ValueError(f"report {r.id} has no label")
            out[i] = 1 if r.label is Label.BUG else 0
        return out

    def subset(self, indices: Sequence[int], source_suffix: str = "") -> "Dataset":
        picked = tuple(self.reports[i] for i in indices)
        return Dataset(reports=picked, source=self.source + source_suffix)


@dataclass(frozen=True)
class DatasetStats:
    total: int
    bug_count: int
    nonbug_count: int
    # (label, intention) -> count
    intention_by_label: dict[tuple[Label, Intention], int] = field(default_factory=dict)


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.findings


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: tuple[int, ...]

    def fold_indices(self, j: int) -> list[int]:
        return [i for i, a in enumerate(self.assignments) if a == j]

    def complement_indices(self, j: int) -> list[int]:
        return [i for i, a in enumerate(self.assignments) if a != j]


def _check_header(header: list[str] | None, expected: tuple[str, ...], path) -> None:
    if header is None:
        raise SchemaError(f"{path}: empty file, expected header {','.join(expected)}")
    got = [h.strip() for h in header]
    for col in expected:
        if col not in got:
            raise SchemaError(f"{path}: missing column {col!r}", column=col)
    for col in got:
        if col not in expected:
            raise SchemaError(f"{path}: unexpected column {col!r}", column=col)
    if got != list(expected):
        raise SchemaError(f"{path}: columns out of order, expected {','.join(expected)}")


def _parse_common(rec: dict[str, str], row: int) -> dict[str, str]:
    rid = rec["id"].strip()
    if not rid:
        raise RowParseError("blank id", row=row)
    out = {"id": rid, "summary": rec["summary"]}
    for f in CATEGORICAL_FIELDS:
        value = rec[f].strip()
        if not value:
            raise RowParseError(f"blank {f}", row=row)
        out[f] = value
    return out


def _load_rows(path, columns: tuple[str, ...]):
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        _check_header(header, columns, path)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(columns):
                raise RowParseError(f"expected {len(columns)} fields, got {len(row)}", row=lineno)
            yield lineno, dict(zip(columns, row))


def load_csv(path) -> Dataset:
    """Load a labeled dataset; strict about schema, enum domains and id uniqueness."""
    reports = []
    seen: set[str] = set()
    for lineno, rec in _load_rows(path, LABELED_COLUMNS):
        common = _parse_common(rec, lineno)
        report = BugReport(
            intention=_parse_enum(Intention, rec["intention"], lineno),
            label=_parse_enum(Label, rec["label"], lineno),
            **common,
        )
        if report.id in seen:
            raise DatasetError(f"{path}: duplicate id: {report.id}")
        seen.add(report.id)
        reports.append(report)
    return Dataset(reports=tuple(reports), source=str(path))


def load_annotation_csv(path) -> Dataset:
    """Load the unlabeled annotation variant (no intention/label columns)."""
    reports = []
    seen: set[str] = set()
    for lineno, rec in _load_rows(path, ANNOTATION_COLUMNS):
        common = _parse_common(rec, lineno)
        report = BugReport(intention=None, label=None, **common)
        if report.id in seen:
            raise DatasetError(f"{path}: duplicate id: {report.id}")
        seen.add(report.id)
        reports.append(report)
    return Dataset(reports=tuple(reports), source=str(path))


def load_prediction_csv(path) -> Dataset:
    """Load input for prediction: labeled, label-less, or annotation schema.

    Present intention/label values are parsed; absent columns yield None.
    """
    with open(path, newline="", encoding="utf-8") as f:
        header = next(csv.reader(f), None)
    if header is None:
        raise SchemaError(f"{path}: empty file")
    got = tuple(h.strip() for h in header)
    if got == LABELED_COLUMNS:
        return load_csv(path)
    if got == ANNOTATION_COLUMNS:
        return load_annotation_csv(path)
    if got == PREDICTION_COLUMNS:
        reports = []
        seen: set[str] = set()
        for lineno, rec in _load_rows(path, PREDICTION_COLUMNS):
            common = _parse_common(rec, lineno)
            report = BugReport(
                intention=_parse_enum(Intention, rec["intention"], lineno), label=None, **common
            )
            if report.id in seen:
                raise DatasetError(f"{path}: duplicate id: {report.id}")
            seen.add(report.id)
            reports.append(report)
        return Dataset(reports=tuple(reports), source=str(path))
    for col in ANNOTATION_COLUMNS:
        if col not in got:
            raise SchemaError(f"{path}: missing column {col!r}", column=col)
    raise SchemaError(f"{path}: header does not match any supported schema")


def write_csv(ds: Dataset, path) -> None:
    """Write the labeled CSV variant (unlabeled fields serialize as '')."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(LABELED_COLUMNS)
        for r in ds:
            writer.writerow([
                r.id, r.product, r.component, r.reporter, r.severity, r.summary,
                r.intention.value if r.intention else "",
                r.label.value if r.label else "",
            ])


def write_annotation_csv(ds: Dataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(ANNOTATION_COLUMNS)
        for r in ds:
            writer.writerow([r.id, r.product, r.component, r.reporter, r.severity, r.summary])


def validate(ds: Dataset) -> ValidationReport:
    """Collect dataset-level findings; an empty list means the dataset is fit
    for training."""
    findings = []
    seen: set[str] = set()
    for r in ds:
        if not r.summary.strip():
            findings.append(f"empty summary: id {r.id}")
        if r.id in seen:
            findings.append(f"duplicate id: {r.id}")
        seen.add(r.id)
        if r.label is None or r.intention is None:
            findings.append(f"unlabeled report: id {r.id}")
    labels = {r.label for r in ds if r.label is not None}
    if len(ds) > 0 and len(labels) == 1:
        only = next(iter(labels))
        findings.append(f"single-class dataset: all labels are {only.value}")
    return ValidationReport(findings=tuple(findings))


def stats(ds: Dataset) -> DatasetStats:
    """Exact counts by label and by (label, intention)."""
    table = {(lb, it): 0 for lb in Label for it in Intention}
    bug = nonbug = 0
    for r in ds:
        if r.label is None or r.intention is None:
            raise ValueError(f"stats requires labeled reports; id {r.id} is unlabeled")
        if r.label is Label.BUG:
            bug += 1
        else:
            nonbug += 1
        table[(r.label, r.intention)] += 1
    return DatasetStats(total=len(ds), bug_count=bug, nonbug_count=nonbug, intention_by_label=table)


def stratified_kfold(ds: Dataset, k: int, seed: int) -> FoldPlan:
    """Assign each report to one of k folds, stratified by label.

    Within each class the shuffled members are dealt round-robin; the deal
    position carries over between classes so overall fold sizes also differ
    by at most one. Pure function of (dataset order, k, seed).
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    ds.labels()
    rng = np.random.default_rng(seed)
    assignments = [0] * len(ds)
    offset = 0
    for label in (Label.BUG, Label.NONBUG):
        idxs = [i for i, r in enumerate(ds) if r.label is label]
        if len(idxs) < k:
            raise InfeasibleStratificationError(
                f"class {label.value} has {len(idxs)} members, fewer than k={k}"
            )
        perm = rng.permutation(len(idxs))
        for pos, j in enumerate(perm):
            assignments[idxs[j]] = (offset + pos) % k
        offset += len(idxs)
    return FoldPlan(k=k, assignments=tuple(assignments))


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def train_test_split(ds: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Stratified split with |test| = round(total * test_fraction).

    Per-class test quotas are floor(count * fraction) topped up by largest
    fractional remainder, so the overall size is exact and the split stays
    stratified. Returns (train, test); each preserves original row order.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    ds.labels()
    n = len(ds)
    n_test = _round_half_up(n * test_fraction)
    by_class = {
        label: [i for i, r in enumerate(ds) if r.label is label] for label in (Label.BUG, Label.NONBUG)
    }
    quotas = {}
    remainders = []
    for label, idxs in by_class.items():
        ideal = len(idxs) * test_fraction
        quotas[label] = int(np.floor(ideal))
        remainders.append((-(ideal - np.floor(ideal)), label.value, label))
    shortfall = n_test - sum(quotas.values())
    order = [label for _, _, label in sorted(remainders)]
    while shortfall > 0:
        progressed = False
        for label in order:
            if shortfall > 0 and quotas[label] < len(by_class[label]):
                quotas[label] += 1
                shortfall -= 1
                progressed = True
        if not progressed:
            break
    rng = np.random.default_rng(seed)
    test_idx: set[int] = set()
    for label in (Label.BUG, Label.NONBUG):
        idxs = by_class[label]
        perm = rng.permutation(len(idxs))
        test_idx.update(idxs[j] for j in perm[: quotas[label]])
    train = ds.subset([i for i in range(n) if i not in test_idx], ":train")
    test = ds.subset([i for i in range(n) if i in test_idx], ":test")
    return train, test
