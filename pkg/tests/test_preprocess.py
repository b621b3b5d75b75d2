import re
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bugtriage.porter import stem
from bugtriage.preprocess import (
    StopwordList,
    bundled_stopwords,
    normalize_case,
    preprocess,
    remove_stopwords,
    tokenize,
)

TOKEN_RE = re.compile(r"[a-z]+\Z")


def load_porter_reference():
    text = resources.files("bugtriage.resources").joinpath("porter_reference.txt").read_text("utf-8")
    pairs = []
    for line in text.splitlines():
        if line and not line.startswith("#"):
            word, stemmed = line.split()
            pairs.append((word, stemmed))
    return pairs


class TestNormalizeCase:
    def test_lowers_cased_characters(self):
        assert normalize_case("Copy XML") == "copy xml"

    def test_empty(self):
        assert normalize_case("") == ""

    def test_idempotent(self):
        s = "Kernel Module DVB-tpci Does NOT Find its Firmware!"
        assert normalize_case(normalize_case(s)) == normalize_case(s)


class TestTokenize:
    def test_digits_deleted_punctuation_spaced(self):
        assert tokenize("bug 62478!") == ["bug"]

    def test_hash_prefix(self):
        assert tokenize("#document nodes") == ["document", "nodes"]

    def test_digits_only(self):
        assert tokenize("123 456") == []

    def test_digits_inside_words_are_deleted_not_split(self):
        assert tokenize("log4j") == ["logj"]

    def test_apostrophe_splits(self):
        assert tokenize("doesn't work") == ["doesn", "t", "work"]

    @given(st.text(max_size=200))
    def test_never_yields_digits_or_whitespace(self, text):
        for tok in tokenize(text):
            assert tok
            assert not any(c.isdigit() or c.isspace() for c in tok)


class TestRemoveStopwords:
    def test_gentoo_style_summary(self):
        sw = bundled_stopwords()
        tokens = ["does", "not", "find", "its", "firmware"]
        assert remove_stopwords(tokens, sw) == ["find", "firmware"]

    def test_empty(self):
        assert remove_stopwords([], bundled_stopwords()) == []

    def test_no_stopwords_unchanged(self):
        sw = bundled_stopwords()
        tokens = ["kernel", "firmware", "segfault"]
        assert remove_stopwords(tokens, sw) == tokens

    def test_idempotent(self):
        sw = bundled_stopwords()
        tokens = ["the", "crash", "on", "startup"]
        once = remove_stopwords(tokens, sw)
        assert remove_stopwords(once, sw) == once


class TestStopwordList:
    def test_rejects_uppercase_entries(self):
        with pytest.raises(ValueError):
            StopwordList(words=frozenset({"The"}), source="bad")

    def test_bundled_list_is_versioned_and_lowercase(self):
        sw = bundled_stopwords()
        assert sw.source == "english-basic-1"
        assert len(sw.words) >= 100
        assert all(TOKEN_RE.match(w) for w in sw.words)


class TestPorter:
    def test_spec_examples(self):
        assert stem("caresses") == "caress"
        assert stem("sort") == "sort"
        assert stem("a") == "a"

    def test_reference_vocabulary_full_agreement(self):
        pairs = load_porter_reference()
        assert len(pairs) >= 100
        mismatches = [(w, e, stem(w)) for w, e in pairs if stem(w) != e]
        assert mismatches == []

    @given(st.from_regex(r"[a-z]{1,20}", fullmatch=True))
    def test_closed_over_lowercase_ascii(self, word):
        out = stem(word)
        assert TOKEN_RE.match(out)
        assert len(out) <= len(word) + 1


class TestPreprocess:
    def test_eclipse_summary(self):
        out = preprocess("logical structures table should sort on name")
        assert out == [stem(w) for w in ["logical", "structures", "table", "sort", "name"]]

    def test_empty(self):
        assert preprocess("") == []

    def test_deterministic(self):
        s = "Regression in JMeter 5.0 due to fix of Bug 62478"
        assert preprocess(s) == preprocess(s)

    def test_non_ascii_tokens_dropped(self):
        assert preprocess("überlauf crash") == ["crash"]

    def test_stem_colliding_with_stopword_is_filtered(self):
        # "dos" stems to "do", which is a stopword
        assert "do" not in preprocess("dos attack vector")

    @settings(max_examples=200)
    @given(st.text(max_size=120))
    def test_output_always_satisfies_token_invariants(self, text):
        sw = bundled_stopwords()
        for tok in preprocess(text, sw):
            assert TOKEN_RE.match(tok)
            assert tok not in sw
