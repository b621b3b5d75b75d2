from collections import Counter
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bugtriage.corpus import (
    BugReport,
    Dataset,
    Intention,
    Label,
    load_annotation_csv,
    load_csv,
    load_prediction_csv,
    stats,
    stratified_kfold,
    train_test_split,
    validate,
    write_annotation_csv,
    write_csv,
)
from bugtriage.errors import DatasetError, InfeasibleStratificationError, RowParseError, SchemaError

REPO = Path(__file__).resolve().parents[1]

HEADER = "id,product,component,reporter,severity,summary,intention,label\n"


def make_report(i, label=Label.BUG, intention=Intention.EXPLANATION, **kw):
    fields = dict(
        id=str(i), product="core", component="io", reporter="alice",
        severity="major", summary=f"crash in module {i}", intention=intention, label=label,
    )
    fields.update(kw)
    return BugReport(**fields)


def make_dataset(n_bug, n_nonbug):
    reports = [make_report(i, Label.BUG) for i in range(n_bug)]
    reports += [
        make_report(n_bug + i, Label.NONBUG, Intention.SUGGESTION) for i in range(n_nonbug)
    ]
    return Dataset(reports=tuple(reports), source="test")


class TestLoadCsv:
    def test_single_row(self, tmp_path):
        p = tmp_path / "one.csv"
        p.write_text(HEADER + "1,core,io,alice,major,crash on startup,explanation,bug\n")
        ds = load_csv(p)
        assert len(ds) == 1
        assert ds[0].label is Label.BUG
        assert ds[0].intention is Intention.EXPLANATION

    def test_enum_parsing_is_case_insensitive(self, tmp_path):
        p = tmp_path / "case.csv"
        p.write_text(HEADER + "1,core,io,alice,major,crash,Explanation,Bug\n")
        ds = load_csv(p)
        assert ds[0].label is Label.BUG

    def test_unknown_intention_is_row_error(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text(HEADER + "1,core,io,alice,major,crash,advice,bug\n")
        with pytest.raises(RowParseError) as err:
            load_csv(p)
        assert err.value.row == 2

    def test_missing_column_names_it(self, tmp_path):
        p = tmp_path / "cols.csv"
        p.write_text("id,product,component,reporter,severity,summary,intention\n")
        with pytest.raises(SchemaError) as err:
            load_csv(p)
        assert err.value.column == "label"

    def test_extra_column_names_it(self, tmp_path):
        p = tmp_path / "extra.csv"
        p.write_text(HEADER.rstrip() + ",assignee\n")
        with pytest.raises(SchemaError) as err:
            load_csv(p)
        assert err.value.column == "assignee"

    def test_duplicate_id_rejected(self, tmp_path):
        p = tmp_path / "dup.csv"
        p.write_text(
            HEADER
            + "42,core,io,alice,major,crash,explanation,bug\n"
            + "42,core,io,bob,minor,hang,suggestion,non-bug\n"
        )
        with pytest.raises(DatasetError, match="duplicate id: 42"):
            load_csv(p)

    def test_blank_severity_rejected(self, tmp_path):
        p = tmp_path / "sev.csv"
        p.write_text(HEADER + "1,core,io,alice,,crash,explanation,bug\n")
        with pytest.raises(RowParseError, match="blank severity"):
            load_csv(p)

    def test_row_order_preserved(self, tmp_path):
        p = tmp_path / "ord.csv"
        p.write_text(
            HEADER
            + "b,core,io,alice,major,crash,explanation,bug\n"
            + "a,core,io,alice,major,hang,suggestion,non-bug\n"
        )
        ds = load_csv(p)
        assert [r.id for r in ds] == ["b", "a"]

    def test_apache_corpus_matches_expected_distribution(self):
        ds = load_csv(REPO / "data" / "apache.csv")
        st_ = stats(ds)
        assert st_.total == 446
        assert st_.bug_count == 296
        assert st_.nonbug_count == 150

    def test_roundtrip_through_writer(self, tmp_path):
        ds = make_dataset(3, 2)
        p = tmp_path / "rt.csv"
        write_csv(ds, p)
        again = load_csv(p)
        assert again.reports == ds.reports


class TestAnnotationCsv:
    def test_roundtrip(self, tmp_path):
        ds = Dataset(reports=(make_report(1, label=None, intention=None),), source="t")
        p = tmp_path / "ann.csv"
        write_annotation_csv(ds, p)
        again = load_annotation_csv(p)
        assert again[0].label is None
        assert again[0].intention is None

    def test_prediction_loader_accepts_all_three_schemas(self, tmp_path):
        labeled = tmp_path / "l.csv"
        labeled.write_text(HEADER + "1,core,io,alice,major,crash,explanation,bug\n")
        assert load_prediction_csv(labeled)[0].label is Label.BUG
        ann = tmp_path / "a.csv"
        ann.write_text("id,product,component,reporter,severity,summary\n1,core,io,a,major,crash\n")
        assert load_prediction_csv(ann)[0].intention is None
        pred = tmp_path / "p.csv"
        pred.write_text(
            "id,product,component,reporter,severity,summary,intention\n1,core,io,a,major,crash,suggestion\n"
        )
        r = load_prediction_csv(pred)[0]
        assert r.intention is Intention.SUGGESTION and r.label is None

    def test_prediction_loader_names_missing_column(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("id,product,component,reporter,severity\n")
        with pytest.raises(SchemaError) as err:
            load_prediction_csv(p)
        assert err.value.column == "summary"


class TestValidate:
    def test_two_class_dataset_is_valid(self):
        assert validate(make_dataset(1, 1)).valid

    def test_single_class_finding(self):
        report = validate(make_dataset(3, 0))
        assert any("single-class" in f for f in report.findings)

    def test_duplicate_id_finding(self):
        ds = Dataset(reports=(make_report("42"), make_report("42", Label.NONBUG)), source="t")
        report = validate(ds)
        assert "duplicate id: 42" in report.findings

    def test_empty_summary_finding(self):
        ds = Dataset(reports=(make_report(1, summary="   "), make_report(2, Label.NONBUG)))
        assert any(f.startswith("empty summary") for f in validate(ds).findings)


class TestStats:
    def test_empty(self):
        st_ = stats(Dataset(reports=()))
        assert st_.total == 0 and st_.bug_count == 0 and st_.nonbug_count == 0
        assert all(v == 0 for v in st_.intention_by_label.values())

    def test_apache_intention_table(self):
        st_ = stats(load_csv(REPO / "data" / "apache.csv"))
        t = st_.intention_by_label
        assert t[(Label.BUG, Intention.EXPLANATION)] == 265
        assert t[(Label.BUG, Intention.SUGGESTION)] == 31
        assert t[(Label.NONBUG, Intention.EXPLANATION)] == 9
        assert t[(Label.NONBUG, Intention.SUGGESTION)] == 141

    def test_gentoo_totals(self):
        st_ = stats(load_csv(REPO / "data" / "gentoo.csv"))
        assert (st_.total, st_.bug_count, st_.nonbug_count) == (511, 294, 217)

    def test_row_sums_match_label_counts(self):
        ds = make_dataset(7, 5)
        st_ = stats(ds)
        assert st_.total == len(ds)
        bug_row = sum(v for (lb, _), v in st_.intention_by_label.items() if lb is Label.BUG)
        assert bug_row == st_.bug_count


class TestStratifiedKfold:
    def test_balanced_100_into_10(self):
        ds = make_dataset(50, 50)
        plan = stratified_kfold(ds, k=10, seed=3)
        labels = ds.labels()
        for j in range(10):
            idx = plan.fold_indices(j)
            assert len(idx) == 10
            assert labels[idx].sum() == 5

    def test_small_class_infeasible(self):
        ds = make_dataset(10, 1)
        with pytest.raises(InfeasibleStratificationError):
            stratified_kfold(ds, k=10, seed=0)

    def test_deterministic(self):
        ds = make_dataset(23, 17)
        a = stratified_kfold(ds, k=5, seed=11)
        b = stratified_kfold(ds, k=5, seed=11)
        assert a == b

    def test_k_below_two_rejected(self):
        with pytest.raises(ValueError):
            stratified_kfold(make_dataset(5, 5), k=1, seed=0)

    @settings(max_examples=40, deadline=None)
    @given(
        n_bug=st.integers(4, 60),
        n_nonbug=st.integers(4, 60),
        k=st.integers(2, 4),
        seed=st.integers(0, 2**31),
    )
    def test_fold_invariants(self, n_bug, n_nonbug, k, seed):
        ds = make_dataset(n_bug, n_nonbug)
        plan = stratified_kfold(ds, k=k, seed=seed)
        n = len(ds)
        sizes = [len(plan.fold_indices(j)) for j in range(k)]
        assert sum(sizes) == n
        assert max(sizes) - min(sizes) <= 1
        labels = ds.labels()
        for c in (0, 1):
            per_fold = [int((labels[plan.fold_indices(j)] == c).sum()) for j in range(k)]
            assert max(per_fold) - min(per_fold) <= 1
        assert sorted(i for j in range(k) for i in plan.fold_indices(j)) == list(range(n))


class TestTrainTestSplit:
    def test_eighty_twenty(self):
        train, test = train_test_split(make_dataset(50, 50), 0.2, seed=1)
        assert len(test) == 20 and len(train) == 80
        assert sum(1 for r in test if r.label is Label.BUG) == 10

    def test_fraction_bounds(self):
        ds = make_dataset(5, 5)
        for bad in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                train_test_split(ds, bad, seed=0)

    def test_exact_partition(self):
        ds = make_dataset(13, 9)
        train, test = train_test_split(ds, 0.3, seed=7)
        all_ids = Counter(r.id for r in ds)
        split_ids = Counter(r.id for r in train) + Counter(r.id for r in test)
        assert split_ids == all_ids

    @settings(max_examples=40, deadline=None)
    @given(
        n_bug=st.integers(2, 50),
        n_nonbug=st.integers(2, 50),
        fraction=st.floats(0.05, 0.95),
        seed=st.integers(0, 2**31),
    )
    def test_partition_properties(self, n_bug, n_nonbug, fraction, seed):
        ds = make_dataset(n_bug, n_nonbug)
        train, test = train_test_split(ds, fraction, seed=seed)
        n = len(ds)
        assert len(test) == int(np.floor(n * fraction + 0.5))
        ids = sorted(r.id for r in train) + sorted(r.id for r in test)
        assert sorted(ids) == sorted(r.id for r in ds)
        assert train.reports == train_test_split(ds, fraction, seed=seed)[0].reports
