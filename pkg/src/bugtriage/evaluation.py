"""Cross-validated scoring and the three-configuration ablation grid.

Fold hygiene: every fitted artifact (TF-IDF tables, min-max parameters, the
classifier) is fitted on the k-1 training folds only; the held-out fold
never reaches a fit call. Embedding vectors carry no fitted state, so they
are computed once per dataset and sliced per fold. An optional ``audit``
callback receives (fold, stage, row_ids) at each fit boundary with the ids
actually seen by that fit, which is how the leakage guard is asserted in
the tests.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .corpus import Dataset, stratified_kfold
from .features import (
    FeatureConfig,
    FeatureMode,
    apply_minmax,
    build_features,
    fit_minmax,
    fit_tfidf,
    make_embedder,
)
from .classifiers import make_classifier
from .metrics import ConfusionMatrix, Metrics, confusion, mean_metrics, metrics
from .preprocess import StopwordList, preprocess
from .synth import SynthSpec, generate_synthetic

AuditFn = Callable[[int, str, tuple[str, ...]], None]

# classifiers whose training consumes randomness; they get a per-fold seed
_SEEDED_KINDS = {"svm", "rf", "tree"}

DEFAULT_CLASSIFIERS: tuple[tuple[str, dict], ...] = (
    ("knn", {}),
    ("nb", {}),
    ("lr", {}),
    ("svm", {}),
    ("rf", {}),
)

ALL_MODES = (FeatureMode.TEXT, FeatureMode.TEXT_FREQ, FeatureMode.TEXT_FREQ_INTENTION)


@dataclass(frozen=True)
class FoldOutcome:
    fold: int
    cm: ConfusionMatrix
    scores: Metrics


@dataclass(frozen=True)
class CVResult:
    folds: tuple[FoldOutcome, ...]
    mean: Metrics
    config: dict


def _embed_dataset(ds: Dataset, backend, stopwords: StopwordList | None) -> np.ndarray:
    token_seqs = [preprocess(r.summary, stopwords) for r in ds]
    return backend.embed_batch(token_seqs)


def cross_validate(
    ds: Dataset,
    cfg: FeatureConfig,
    classifier: tuple[str, dict],
    *,
    k: int = 10,
    seed: int = 0,
    stopwords: StopwordList | None = None,
    backend=None,
    embeddings: np.ndarray | None = None,
    audit: AuditFn | None = None,
) -> CVResult:
    """Stratified k-fold evaluation of one (feature config, classifier) cell."""
    kind, params = classifier
    plan = stratified_kfold(ds, k, seed)
    if backend is None:
        backend = make_embedder(cfg)
    if embeddings is None:
        embeddings = _embed_dataset(ds, backend, stopwords)
    y_all = ds.labels()
    fold_seeds = np.random.SeedSequence(seed).generate_state(k)
    outcomes = []
    for j in range(k):
        train_idx = plan.complement_indices(j)
        test_idx = plan.fold_indices(j)
        train_ds = ds.subset(train_idx)
        test_ds = ds.subset(test_idx)

        tfidf = fit_tfidf(train_ds, cfg.freq_fields())
        if audit:
            audit(j, "tfidf", tuple(r.id for r in train_ds))
        train_m = build_features(
            train_ds, cfg, tfidf, backend, stopwords, embeddings=embeddings[train_idx]
        )
        norm = fit_minmax(train_m)
        if audit:
            audit(j, "minmax", train_m.row_ids)
        train_n = apply_minmax(norm, train_m)

        fold_params = dict(params)
        if kind in _SEEDED_KINDS and "seed" not in fold_params:
            fold_params["seed"] = int(fold_seeds[j])
        clf = make_classifier(kind, **fold_params)
        clf.fit(train_n.values, y_all[train_idx])
        if audit:
            audit(j, "classifier", train_n.row_ids)

        test_m = build_features(
            test_ds, cfg, tfidf, backend, stopwords, embeddings=embeddings[test_idx]
        )
        preds = clf.predict(apply_minmax(norm, test_m).values)
        cm = confusion(y_all[test_idx], preds)
        outcomes.append(FoldOutcome(fold=j, cm=cm, scores=metrics(cm)))
    return CVResult(
        folds=tuple(outcomes),
        mean=mean_metrics([o.scores for o in outcomes]),
        config={
            "classifier": kind,
            "classifier_params": dict(params),
            "mode": cfg.mode.value,
            "embedder": backend.name,
            "k": k,
            "seed": seed,
        },
    )


@dataclass(frozen=True)
class CellResult:
    dataset: str
    mode: str
    classifier: str
    seed: int
    cv: CVResult


@dataclass(frozen=True)
class AblationResult:
    # (dataset, mode, classifier) -> mean accuracy across seeds
    table: dict[tuple[str, str, str], float]
    cells: tuple[CellResult, ...]
    config: dict


def _materialize(name: str, source, seed: int) -> Dataset:
    if isinstance(source, SynthSpec):
        return generate_synthetic(source, seed=seed)
    if isinstance(source, Dataset):
        return source
    raise TypeError(f"dataset {name!r} must be a Dataset or SynthSpec, got {type(source)!r}")


def _run_cell(args) -> CellResult:
    (name, ds, mode_value, kind, params, seed, k, embedder, dim, sidecar_addr, stopwords) = args
    cfg = FeatureConfig(
        mode=FeatureMode(mode_value),
        embedder=embedder,
        embedding_dim=dim,
        sidecar_addr=sidecar_addr,
    )
    cv = cross_validate(ds, cfg, (kind, params), k=k, seed=seed, stopwords=stopwords)
    return CellResult(dataset=name, mode=mode_value, classifier=kind, seed=seed, cv=cv)


def run_ablation(
    datasets: Mapping[str, Dataset | SynthSpec],
    seeds: Sequence[int],
    *,
    modes: Sequence[FeatureMode] = ALL_MODES,
    classifiers: Sequence[tuple[str, dict]] = DEFAULT_CLASSIFIERS,
    k: int = 10,
    embedder: str = "fallback",
    embedding_dim: int = 64,
    sidecar_addr: str | None = None,
    stopwords: StopwordList | None = None,
    jobs: int = 1,
    audit: AuditFn | None = None,
) -> AblationResult:
    """Full (dataset x mode x classifier) grid of cross-validated runs.

    Synthetic spec entries are regenerated per seed; fixed datasets are
    re-folded per seed. Cells are independent; with jobs > 1 they run in a
    process pool and results are assembled by key, so the output does not
    depend on completion order. The audit callback is only supported on the
    sequential path.
    """
    if not seeds:
        raise ValueError("at least one seed is required")
    if audit is not None and jobs > 1:
        raise ValueError("audit instrumentation requires jobs=1")
    mode_values = [m.value for m in modes]
    cells: list[CellResult] = []
    if jobs > 1:
        work = []
        for name in datasets:
            for seed in seeds:
                ds = _materialize(name, datasets[name], seed)
                for mode_value in mode_values:
                    for kind, params in classifiers:
                        work.append(
                            (name, ds, mode_value, kind, dict(params), seed, k,
                             embedder, embedding_dim, sidecar_addr, stopwords)
                        )
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_run_cell, work))
    else:
        for name in datasets:
            for seed in seeds:
                ds = _materialize(name, datasets[name], seed)
                backends = {}
                for mode_value in mode_values:
                    for kind, params in classifiers:
                        cfg = FeatureConfig(
                            mode=FeatureMode(mode_value),
                            embedder=embedder,
                            embedding_dim=embedding_dim,
                            sidecar_addr=sidecar_addr,
                        )
                        key = (embedder, embedding_dim)
                        if key not in backends:
                            backend = make_embedder(cfg)
                            backends[key] = (backend, _embed_dataset(ds, backend, stopwords))
                        backend, emb = backends[key]
                        cv = cross_validate(
                            ds, cfg, (kind, dict(params)), k=k, seed=seed,
                            stopwords=stopwords, backend=backend, embeddings=emb, audit=audit,
                        )
                        cells.append(
                            CellResult(dataset=name, mode=mode_value, classifier=kind, seed=seed, cv=cv)
                        )

    cells.sort(key=lambda c: (c.dataset, mode_values.index(c.mode), c.classifier, c.seed))
    table: dict[tuple[str, str, str], float] = {}
    for name in datasets:
        for mode_value in mode_values:
            for kind, _ in classifiers:
                picked = [
                    c.cv.mean.accuracy
                    for c in cells
                    if c.dataset == name and c.mode == mode_value and c.classifier == kind
                ]
                table[(name, mode_value, kind)] = sum(picked) / len(picked)
    return AblationResult(
        table=table,
        cells=tuple(cells),
        config={
            "datasets": list(datasets),
            "seeds": list(seeds),
            "modes": mode_values,
            "classifiers": [list(c) for c in classifiers],
            "k": k,
            "embedder": embedder,
            "embedding_dim": embedding_dim,
        },
    )


def _record_lines(cells: Sequence[CellResult]) -> list[str]:
    lines = []
    for c in cells:
        for fold in c.cv.folds:
            rec = {
                "dataset": c.dataset,
                "mode": c.mode,
                "classifier": c.classifier,
                "seed": c.seed,
                "fold": fold.fold,
                "tp": fold.cm.tp,
                "tn": fold.cm.tn,
                "fp": fold.cm.fp,
                "fn": fold.cm.fn,
                "accuracy": fold.scores.accuracy,
                "precision": fold.scores.precision,
                "recall": fold.scores.recall,
                "f_measure": fold.scores.f_measure,
                "undefined": sorted(fold.scores.undefined),
            }
            lines.append(json.dumps(rec, sort_keys=True))
    return lines


def format_table(result: AblationResult) -> str:
    """Human-readable grid: one row per (dataset, mode), one column per
    classifier, cells are mean accuracy percentages."""
    kinds = [kind for kind, _ in result.config.get("classifiers", [])]
    if not kinds:
        kinds = sorted({key[2] for key in result.table})
    modes = result.config.get("modes", [m.value for m in ALL_MODES])
    names = result.config.get("datasets", sorted({key[0] for key in result.table}))
    header = f"{'dataset':<12} {'features':<22}" + "".join(f"{k:>8}" for k in kinds)
    lines = [header, "-" * len(header)]
    for name in names:
        for mode_value in modes:
            row = f"{name:<12} {mode_value:<22}"
            for kind in kinds:
                acc = result.table.get((name, mode_value, kind))
                row += f"{100.0 * acc:>8.1f}" if acc is not None else f"{'-':>8}"
            lines.append(row)
    return "\n".join(lines) + "\n"


def render_report(result: AblationResult, out_dir, charts: bool = False) -> list[Path]:
    """Write results.jsonl (one record per dataset/mode/classifier/seed/fold)
    and the accuracy grid; optionally one chart per metric."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    results_path = out / "results.jsonl"
    with open(results_path, "w", encoding="utf-8") as f:
        for line in _record_lines(result.cells):
            f.write(line + "\n")
    paths.append(results_path)
    table_path = out / "ablation.txt"
    with open(table_path, "w", encoding="utf-8") as f:
        f.write(format_table(result))
    paths.append(table_path)
    if charts:
        paths.extend(_render_charts(result, out))
    return paths


def _render_charts(result: AblationResult, out: Path) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    kinds = [kind for kind, _ in result.config.get("classifiers", [])]
    modes = result.config.get("modes", [])
    names = result.config.get("datasets", [])
    paths = []
    for metric_name in ("accuracy", "precision", "recall", "f_measure"):
        fig, ax = plt.subplots(figsize=(9, 4.5))
        width = 0.8 / max(1, len(modes))
        x = np.arange(len(kinds) * len(names))
        labels = [f"{n}:{kd}" for n in names for kd in kinds]
        for mi, mode_value in enumerate(modes):
            vals = []
            for name in names:
                for kind in kinds:
                    picked = [
                        getattr(c.cv.mean, metric_name)
                        for c in result.cells
                        if c.dataset == name and c.mode == mode_value and c.classifier == kind
                    ]
                    vals.append(sum(picked) / len(picked) if picked else 0.0)
            ax.bar(x + mi * width, vals, width, label=mode_value)
        ax.set_xticks(x + width * (len(modes) - 1) / 2)
        ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
        ax.set_ylabel(metric_name)
        ax.set_ylim(0, 1)
        ax.legend(fontsize=7)
        fig.tight_layout()
        path = out / f"{metric_name}.png"
        fig.savefig(path, dpi=110)
        plt.close(fig)
        paths.append(path)
    return paths
