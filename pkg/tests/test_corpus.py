from __future__ import annotations

import dataclasses
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plsql2java.corpus import (
    AnonymizationMap,
    apply_anonymization,
    infer_domain_kind,
    load_corpus,
    query_stem,
    reverse_anonymization,
    validate_corpus,
)
from plsql2java.errors import CorpusLayoutError, PairingError, UnknownQueryError

from .conftest import MINI_CORPUS, make_unit


def _write_minimal_corpus(root: Path) -> None:
    (root / "pairs").mkdir(parents=True)
    (root / "domain").mkdir()
    (root / "queries").mkdir()
    (root / "pairs" / "1.plsql").write_text("BEGIN NULL; END;\n")
    (root / "pairs" / "1.java").write_text("class A {}\n")
    (root / "queries" / "q.plsql").write_text("SELECT 1 FROM dual;\n")


class TestLoadCorpus:
    def test_minimal_layout(self, tmp_path):
        _write_minimal_corpus(tmp_path)
        corpus = load_corpus(tmp_path)
        assert len(corpus.pairs) == 1
        assert len(corpus.domain_model.files) == 0
        assert len(corpus.queries) == 1
        assert corpus.anonymization_map is None

    def test_mini_corpus_counts(self):
        corpus = load_corpus(MINI_CORPUS)
        assert len(corpus.pairs) == 5
        assert len(corpus.domain_model.files) == 4
        assert len(corpus.queries) == 3
        assert corpus.anonymization_map is not None

    def test_orphan_source_raises_pairing_error(self, tmp_path):
        _write_minimal_corpus(tmp_path)
        (tmp_path / "pairs" / "3.plsql").write_text("BEGIN NULL; END;\n")
        with pytest.raises(PairingError) as excinfo:
            load_corpus(tmp_path)
        assert excinfo.value.orphan_id == "3"

    def test_missing_directory(self, tmp_path):
        with pytest.raises(CorpusLayoutError):
            load_corpus(tmp_path / "nowhere")

    def test_deterministic_reload(self):
        first = load_corpus(MINI_CORPUS)
        second = load_corpus(MINI_CORPUS)
        assert first.pairs == second.pairs
        assert first.domain_model == second.domain_model
        assert first.queries == second.queries

    def test_domain_kinds_inferred(self):
        corpus = load_corpus(MINI_CORPUS)
        kinds = dict(zip(
            [f.path.name for f in corpus.domain_model.files],
            corpus.domain_model.kinds,
        ))
        assert kinds["Customer.java"] == "class"
        assert kinds["Repository.java"] == "interface"
        assert kinds["Money.java"] == "record"

    def test_query_lookup(self):
        corpus = load_corpus(MINI_CORPUS)
        assert query_stem(corpus.query_by_stem("alpha")) == "alpha"
        with pytest.raises(UnknownQueryError):
            corpus.query_by_stem("zeta")


class TestValidateCorpus:
    def test_mini_corpus_is_clean(self):
        assert validate_corpus(load_corpus(MINI_CORPUS)) == []

    def test_duplicate_id_reported(self):
        corpus = load_corpus(MINI_CORPUS)
        dupe = corpus.queries[0]
        broken = dataclasses.replace(corpus, queries=corpus.queries + (dupe,))
        issues = validate_corpus(broken)
        assert [i.reason for i in issues] == ["duplicate-id"]
        assert issues[0].unit_id == dupe.id

    def test_language_mismatch_reported(self):
        corpus = load_corpus(MINI_CORPUS)
        java_unit = corpus.pairs[0].target
        broken = dataclasses.replace(
            corpus, queries=corpus.queries + (java_unit,)
        )
        reasons = {i.reason for i in validate_corpus(broken)}
        assert "duplicate-id" in reasons
        assert "language-mismatch" in reasons


class TestInferDomainKind:
    @pytest.mark.parametrize("text,kind", [
        ("public class Foo {}", "class"),
        ("public interface Foo {}", "interface"),
        ("public record Foo(int a) {}", "record"),
        ("final class Classy {}", "class"),
        ("// nothing declared", "class"),
    ])
    def test_first_keyword_wins(self, text, kind):
        assert infer_domain_kind(text) == kind


class TestAnonymization:
    MAP = AnonymizationMap((("klant", "c1"),))

    def test_token_boundary_replacement(self):
        unit = make_unit("SELECT klant FROM klanten")
        out = apply_anonymization(unit, self.MAP)
        assert out.text == "SELECT c1 FROM klanten"

    def test_reverse_on_member_access(self):
        unit = make_unit("c1.save()", language="java")
        out = reverse_anonymization(unit, self.MAP)
        assert out.text == "klant.save()"

    def test_empty_map_is_identity(self):
        unit = make_unit("SELECT klant FROM klanten")
        empty = AnonymizationMap(())
        assert apply_anonymization(unit, empty).text == unit.text
        assert reverse_anonymization(unit, empty).text == unit.text

    def test_alias_equal_to_original_rejected(self):
        with pytest.raises(ValueError):
            AnonymizationMap((("a", "b"), ("b", "a")))

    def test_duplicate_originals_rejected(self):
        with pytest.raises(ValueError):
            AnonymizationMap((("a", "x"), ("a", "y")))

    def test_duplicate_aliases_rejected(self):
        with pytest.raises(ValueError):
            AnonymizationMap((("a", "x"), ("b", "x")))

    def test_plsql_boundary_includes_hash_dollar(self):
        unit = make_unit("tot# tot", language="plsql")
        mapped = apply_anonymization(unit, AnonymizationMap((("tot", "t9"),)))
        # tot# is one identifier in PL/SQL, so only the bare token changes
        assert mapped.text == "tot# t9"

    def test_java_boundary_excludes_hash(self):
        unit = make_unit("tot# tot", language="java")
        mapped = apply_anonymization(unit, AnonymizationMap((("tot", "t9"),)))
        assert mapped.text == "t9# t9"


_IDENTIFIERS = st.from_regex(r"[a-z]{3,8}", fullmatch=True)


@settings(max_examples=150)
@given(
    words=st.lists(_IDENTIFIERS, min_size=1, max_size=20),
    originals=st.lists(_IDENTIFIERS, min_size=1, max_size=4, unique=True),
)
def test_anonymization_round_trip(words, originals):
    aliases = [f"z{i}_" for i in range(len(originals))]
    mapping = AnonymizationMap(tuple(zip(originals, aliases)))
    text = " ".join(words)
    unit = make_unit(text)
    # the round-trip law holds when no alias already occurs in the text
    restored = reverse_anonymization(apply_anonymization(unit, mapping), mapping)
    assert restored.text == text
