"""Command-line entry point.

Subcommands: stats, fetch, preprocess, featurize, train, evaluate, ablate,
predict, synth. Exit codes: 0 success, 1 runtime failure, 2 usage or schema
error. Every command is reproducible: identical invocation, seed and inputs
give byte-identical outputs. A JSON config file can pre-set any flag;
explicit flags win, and --print-config dumps the resolved configuration
without running.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import pipeline
from .corpus import (
    Intention,
    Label,
    load_csv,
    load_prediction_csv,
    stats,
    validate,
    write_annotation_csv,
)
from .errors import (
    BugTriageError,
    DatasetError,
    InfeasibleStratificationError,
    ModelFormatError,
    RowParseError,
    SchemaError,
)
from .evaluation import (
    ALL_MODES,
    DEFAULT_CLASSIFIERS,
    cross_validate,
    format_table,
    render_report,
    run_ablation,
)
from .features import FeatureConfig, FeatureMode, build_features, fit_minmax, fit_tfidf, apply_minmax, make_embedder, matrix_to_csv
from .preprocess import bundled_stopwords, load_stopwords, preprocess
from .synth import generate_synthetic, load_synth_spec
from .tracker import ENV_TOKEN, ENV_URL, fetch_tracker

USAGE_ERRORS = (SchemaError, RowParseError, DatasetError, ModelFormatError, InfeasibleStratificationError)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="run seed (default 0)")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="parallel workers for grid cells (default: available parallelism)")
    p.add_argument("--stopwords", metavar="PATH", help="override the bundled stopword list")
    p.add_argument("--embedder", choices=("fallback", "sidecar"), default="fallback")
    p.add_argument("--sidecar-addr", metavar="HOST:PORT", help="embedding sidecar address")
    p.add_argument("--embedding-dim", type=int, default=64,
                   help="fallback embedding width (sidecar announces its own)")
    p.add_argument("--out", metavar="PATH", help="output file or directory")
    p.add_argument("--config", metavar="FILE", help="JSON config file; explicit flags win")
    p.add_argument("--print-config", action="store_true",
                   help="print the resolved configuration as JSON and exit")


def _mode_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=[m.value for m in FeatureMode],
                   default=FeatureMode.TEXT_FREQ_INTENTION.value,
                   help="feature configuration (default text+freq+intention)")


def _stopword_list(args):
    return load_stopwords(args.stopwords) if args.stopwords else bundled_stopwords()


def _feature_config(args, mode=None) -> FeatureConfig:
    return FeatureConfig(
        mode=FeatureMode(mode or getattr(args, "mode", FeatureMode.TEXT_FREQ_INTENTION.value)),
        embedder=args.embedder,
        embedding_dim=args.embedding_dim,
        sidecar_addr=args.sidecar_addr,
    )


def _maybe_print_config(args) -> bool:
    if not args.print_config:
        return False
    resolved = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "print_config", "config")}
    print(json.dumps(resolved, sort_keys=True, default=str))
    return True


def cmd_stats(args) -> int:
    if _maybe_print_config(args):
        return 0
    ds = load_csv(args.dataset)
    report = validate(ds)
    st = stats(ds)
    print(f"dataset: {args.dataset}")
    print(f"total: {st.total}  bug: {st.bug_count}  non-bug: {st.nonbug_count}")
    print(f"{'':<12}{'explanation':>12}{'suggestion':>12}")
    for lb in (Label.BUG, Label.NONBUG):
        row = f"{lb.value:<12}"
        for it in (Intention.EXPLANATION, Intention.SUGGESTION):
            row += f"{st.intention_by_label[(lb, it)]:>12}"
        print(row)
    if not report.valid:
        print("findings:")
        for f in report.findings:
            print(f"  - {f}")
    return 0


def cmd_fetch(args) -> int:
    if _maybe_print_config(args):
        return 0
    base_url = args.base_url or os.environ.get(ENV_URL)
    if not base_url:
        raise SchemaError(f"no tracker URL: pass --base-url or set {ENV_URL}")
    token = args.token or os.environ.get(ENV_TOKEN)
    ds = fetch_tracker(base_url, status=args.status, resolution=args.resolution,
                       token=token, limit=args.limit)
    out = args.out or "fetched.csv"
    write_annotation_csv(ds, out)
    print(f"fetched {len(ds)} reports from {ds.source} -> {out}")
    return 0


def cmd_preprocess(args) -> int:
    if _maybe_print_config(args):
        return 0
    stopwords = _stopword_list(args)
    if args.text is not None:
        print(" ".join(preprocess(args.text, stopwords)))
        return 0
    if not args.dataset:
        raise SchemaError("preprocess needs a dataset path or --text")
    ds = load_prediction_csv(args.dataset)
    shown = 0
    for r in ds:
        print(f"{r.id}\t{' '.join(preprocess(r.summary, stopwords))}")
        shown += 1
        if args.limit and shown >= args.limit:
            break
    return 0


def cmd_featurize(args) -> int:
    if _maybe_print_config(args):
        return 0
    ds = load_csv(args.dataset)
    cfg = _feature_config(args)
    stopwords = _stopword_list(args)
    backend = make_embedder(cfg)
    tfidf = fit_tfidf(ds, cfg.freq_fields())
    m = build_features(ds, cfg, tfidf, backend, stopwords)
    norm = apply_minmax(fit_minmax(m), m)
    out = args.out or "features.csv"
    matrix_to_csv(norm, out)
    print(f"wrote {len(norm.row_ids)} rows x {len(norm.columns)} columns -> {out}")
    return 0


def cmd_train(args) -> int:
    if _maybe_print_config(args):
        return 0
    ds = load_csv(args.dataset)
    cfg = _feature_config(args)
    stopwords = _stopword_list(args)
    params = pipeline.classifier_params_from_args(args)
    model = pipeline.train_pipeline(ds, cfg, (args.model, params), stopwords=stopwords, seed=args.seed)
    out = args.out or f"{args.model}-model.json"
    pipeline.save_pipeline(model, out)
    preds = pipeline.predict_pipeline(model, ds)
    acc = sum(int(p == (1 if r.label is Label.BUG else 0)) for p, r in zip(preds.labels, ds)) / len(ds)
    print(f"trained {args.model} on {len(ds)} reports (training accuracy {acc:.3f}) -> {out}")
    return 0


def cmd_evaluate(args) -> int:
    if _maybe_print_config(args):
        return 0
    ds = load_csv(args.dataset)
    cfg = _feature_config(args)
    stopwords = _stopword_list(args)
    params = pipeline.classifier_params_from_args(args)
    result = cross_validate(ds, cfg, (args.model, params), k=args.k, seed=args.seed, stopwords=stopwords)
    print(f"{'fold':<6}{'accuracy':>10}{'precision':>11}{'recall':>9}{'f-measure':>11}")
    for fo in result.folds:
        s = fo.scores
        print(f"{fo.fold:<6}{s.accuracy:>10.4f}{s.precision:>11.4f}{s.recall:>9.4f}{s.f_measure:>11.4f}")
    m = result.mean
    print(f"{'mean':<6}{m.accuracy:>10.4f}{m.precision:>11.4f}{m.recall:>9.4f}{m.f_measure:>11.4f}")
    if args.out:
        from .evaluation import CellResult, _record_lines

        cell = CellResult(dataset=str(args.dataset), mode=cfg.mode.value,
                          classifier=args.model, seed=args.seed, cv=result)
        with open(args.out, "w", encoding="utf-8") as f:
            for line in _record_lines([cell]):
                f.write(line + "\n")
        print(f"wrote {args.out}")
    return 0


def cmd_ablate(args) -> int:
    if _maybe_print_config(args):
        return 0
    datasets = {}
    for path in args.data or []:
        datasets[Path(path).stem] = load_csv(path)
    for path in args.spec or []:
        spec = load_synth_spec(path)
        datasets[spec.name] = spec
    if not datasets:
        raise SchemaError("ablate needs at least one --data CSV or --spec synth spec")
    if args.classifiers:
        kinds = [k.strip() for k in args.classifiers.split(",") if k.strip()]
        unknown = set(kinds) - {k for k, _ in DEFAULT_CLASSIFIERS}
        if unknown:
            raise SchemaError(f"unknown classifiers: {sorted(unknown)}")
        classifiers = [(k, dict(p)) for k, p in DEFAULT_CLASSIFIERS if k in kinds]
        if not classifiers:
            raise SchemaError("no classifiers selected")
    else:
        classifiers = [(k, dict(p)) for k, p in DEFAULT_CLASSIFIERS]
    mode_values = [m.strip() for m in args.modes.split(",")] if args.modes else [m.value for m in ALL_MODES]
    modes = [FeatureMode(v) for v in mode_values]
    seeds = [args.seed + i for i in range(args.seeds)]
    stopwords = _stopword_list(args)
    result = run_ablation(
        datasets, seeds, modes=modes, classifiers=classifiers, k=args.k,
        embedder=args.embedder, embedding_dim=args.embedding_dim,
        sidecar_addr=args.sidecar_addr, stopwords=stopwords, jobs=args.jobs,
    )
    out = args.out or "ablation-out"
    paths = render_report(result, out, charts=args.charts)
    print(format_table(result), end="")
    print("wrote " + ", ".join(str(p) for p in paths))
    return 0


def cmd_predict(args) -> int:
    if _maybe_print_config(args):
        return 0
    model = pipeline.load_pipeline(args.model_file)
    ds = load_prediction_csv(args.input)
    result = pipeline.predict_pipeline(model, ds)
    out = args.out or "predictions.csv"
    with open(args.input, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    header = rows[0] + ["predicted_label"] + result.extra_columns
    with open(out, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row, label, extra in zip(rows[1:], result.labels, result.extras):
            writer.writerow(row + [Label.BUG.value if label == 1 else Label.NONBUG.value] + extra)
    print(f"wrote {len(result.labels)} predictions -> {out}")
    return 0


def cmd_synth(args) -> int:
    if _maybe_print_config(args):
        return 0
    spec = load_synth_spec(args.spec)
    ds = generate_synthetic(spec, seed=args.seed)
    from .corpus import write_csv

    out = args.out or f"{spec.name}.csv"
    write_csv(ds, out)
    st = stats(ds)
    print(f"generated {st.total} reports (bug {st.bug_count} / non-bug {st.nonbug_count}) -> {out}")
    return 0


def _add_classifier_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--knn-k", type=int, help="neighbors for knn (default 5)")
    p.add_argument("--rf-trees", type=int, help="trees in the forest (default 100)")
    p.add_argument("--rf-max-depth", type=int, help="tree depth limit (default 32)")
    p.add_argument("--svm-c", type=float, help="SVM regularization C (default 1.0)")
    p.add_argument("--svm-epochs", type=int, help="SVM training epochs (default 300)")
    p.add_argument("--lr-step", type=float, help="LR gradient step (default 0.1)")
    p.add_argument("--lr-max-iter", type=int, help="LR iteration cap (default 5000)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bugtriage", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="dataset totals and the label x intention table")
    p.add_argument("dataset")
    _add_common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("fetch", help="pull raw reports from a bug tracker into the annotation CSV")
    p.add_argument("--base-url", help=f"tracker base URL (or {ENV_URL})")
    p.add_argument("--token", help=f"API token (or {ENV_TOKEN})")
    p.add_argument("--status", default="RESOLVED")
    p.add_argument("--resolution", default="FIXED")
    p.add_argument("--limit", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("preprocess", help="preview the token pipeline")
    p.add_argument("dataset", nargs="?")
    p.add_argument("--text", help="preprocess one string instead of a file")
    p.add_argument("--limit", type=int, help="rows to show")
    _add_common(p)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("featurize", help="export the fused, normalized feature matrix as CSV")
    p.add_argument("dataset")
    _mode_arg(p)
    _add_common(p)
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("train", help="fit one classifier on a full dataset and save it")
    p.add_argument("dataset")
    p.add_argument("--model", choices=[k for k, _ in DEFAULT_CLASSIFIERS], required=True)
    _mode_arg(p)
    _add_classifier_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="stratified k-fold cross-validation for one configuration")
    p.add_argument("dataset")
    p.add_argument("--model", choices=[k for k, _ in DEFAULT_CLASSIFIERS], required=True)
    p.add_argument("--k", type=int, default=10)
    _mode_arg(p)
    _add_classifier_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ablate", help="full feature-mode x classifier grid with a written report")
    p.add_argument("--data", action="append", metavar="CSV", help="labeled dataset (repeatable)")
    p.add_argument("--spec", action="append", metavar="JSON", help="synthetic corpus spec (repeatable)")
    p.add_argument("--classifiers", help="comma-separated subset of knn,nb,lr,svm,rf")
    p.add_argument("--modes", help="comma-separated subset of feature modes")
    p.add_argument("--seeds", type=int, default=10, help="number of seeds, starting at --seed")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--charts", action="store_true", help="also write per-metric charts")
    _add_common(p)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("predict", help="apply a saved model to a CSV of reports")
    p.add_argument("model_file")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus from a spec file")
    p.add_argument("spec")
    _add_common(p)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            with open(args.config, encoding="utf-8") as f:
                overrides = json.load(f)
            known = {a for a in vars(args)}
            stated = set()
            for token in (argv if argv is not None else sys.argv[1:]):
                if token.startswith("--"):
                    stated.add(token[2:].split("=", 1)[0].replace("-", "_"))
            for key, value in overrides.items():
                attr = key.replace("-", "_")
                if attr not in known:
                    raise SchemaError(f"config file sets unknown option {key!r}")
                if attr not in stated:
                    setattr(args, attr, value)
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BugTriageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
