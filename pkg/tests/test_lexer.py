from __future__ import annotations

import json

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from plsql2java.errors import LexError
from plsql2java.lexer import (
    KIND_COMMENT,
    KIND_KEYWORD,
    KIND_NUMBER,
    KIND_STRING,
    KIND_WHITESPACE,
    NormalizationOptions,
    TOKEN_KINDS,
    normalize_tokens,
    term_frequency,
    tokenize_plsql,
)

from .conftest import SNIPPET_DIR


class TestTokenize:
    def test_basic_block(self):
        kinds_and_lexemes = [
            (t.kind, t.lexeme) for t in tokenize_plsql("BEGIN NULL; END;")
        ]
        assert kinds_and_lexemes == [
            ("keyword", "BEGIN"),
            ("whitespace", " "),
            ("keyword", "NULL"),
            ("punctuation", ";"),
            ("whitespace", " "),
            ("keyword", "END"),
            ("punctuation", ";"),
        ]

    def test_string_with_quote_escape(self):
        tokens = tokenize_plsql("'it''s'")
        assert len(tokens) == 1
        assert tokens[0].kind == KIND_STRING
        assert tokens[0].lexeme == "'it''s'"

    def test_line_comment_then_statement(self):
        tokens = tokenize_plsql("-- note\nx := 1;")
        meaningful = [
            (t.kind, t.lexeme) for t in tokens if t.kind != KIND_WHITESPACE
        ]
        assert meaningful == [
            ("comment", "-- note"),
            ("identifier", "x"),
            ("operator", ":="),
            ("number_literal", "1"),
            ("punctuation", ";"),
        ]

    def test_block_comment_spans_lines(self):
        tokens = tokenize_plsql("/* a\nb */ x")
        assert tokens[0].kind == KIND_COMMENT
        assert tokens[0].lexeme == "/* a\nb */"

    def test_unterminated_string_raises_with_offset(self):
        with pytest.raises(LexError) as excinfo:
            tokenize_plsql("x := 'oops")
        assert excinfo.value.offset == 5

    def test_unterminated_block_comment_raises(self):
        with pytest.raises(LexError):
            tokenize_plsql("/* never closed")

    def test_keyword_case_insensitive(self):
        lower = [t.kind for t in tokenize_plsql("begin")]
        upper = [t.kind for t in tokenize_plsql("BEGIN")]
        mixed = [t.kind for t in tokenize_plsql("BeGiN")]
        assert lower == upper == mixed == [KIND_KEYWORD]

    def test_unknown_character_is_single_char_operator(self):
        tokens = tokenize_plsql("a ? b @ c")
        kinds = [t.kind for t in tokens if t.kind != KIND_WHITESPACE]
        assert kinds == ["identifier", "operator", "identifier", "operator",
                         "identifier"]

    def test_number_forms(self):
        text = "1 3.14 1.5e3 2E-7"
        numbers = [t.lexeme for t in tokenize_plsql(text) if t.kind == KIND_NUMBER]
        assert numbers == ["1", "3.14", "1.5e3", "2E-7"]

    def test_spans_are_contiguous(self):
        tokens = tokenize_plsql("SELECT x FROM t WHERE x = 'a';")
        position = 0
        for token in tokens:
            assert token.span == (position, position + len(token.lexeme))
            position = token.span[1]

    def test_all_kinds_are_known(self):
        text = "-- c\nSELECT 'x', 1 FROM t;"
        assert {t.kind for t in tokenize_plsql(text)} <= TOKEN_KINDS


class TestSnippetCorpus:
    """Losslessness and golden dumps over the bundled 20-snippet corpus."""

    SNIPPETS = sorted(SNIPPET_DIR.glob("*.plsql"))

    def test_corpus_has_twenty_snippets(self):
        assert len(self.SNIPPETS) == 20

    @pytest.mark.parametrize("snippet", SNIPPETS, ids=lambda p: p.stem)
    def test_lossless(self, snippet):
        text = snippet.read_text(encoding="utf-8")
        tokens = tokenize_plsql(text)
        assert "".join(t.lexeme for t in tokens) == text

    @pytest.mark.parametrize("snippet", SNIPPETS, ids=lambda p: p.stem)
    def test_golden_dump(self, snippet):
        text = snippet.read_text(encoding="utf-8")
        dump = "\n".join(
            f"{t.kind}\t{json.dumps(t.lexeme)}" for t in tokenize_plsql(text)
        ) + "\n"
        golden = snippet.with_suffix(".tokens").read_text(encoding="utf-8")
        assert dump == golden


# printable soup biased toward PL/SQL syntax; it can open strings or block
# comments it never closes, which the lexer rightly rejects
_SOUP = st.text(
    alphabet=st.sampled_from(
        list("abcXYZ019_#$' \t\n;,().+-*/<>=!|:%&^~{}[]@?")
    ),
    max_size=80,
)


def _tokenize_accepted(text):
    try:
        return tokenize_plsql(text)
    except LexError:
        assume(False)


@settings(max_examples=300)
@given(text=_SOUP)
def test_losslessness_property(text):
    tokens = _tokenize_accepted(text)
    assert "".join(t.lexeme for t in tokens) == text


@settings(max_examples=300)
@given(text=_SOUP)
def test_spans_strictly_increasing(text):
    tokens = _tokenize_accepted(text)
    position = 0
    for token in tokens:
        start, end = token.span
        assert start == position
        assert end > start
        position = end
    assert position == len(text)


class TestNormalize:
    def test_defaults_on_select(self):
        terms = normalize_tokens(tokenize_plsql("SELECT x FROM t"))
        assert terms == ["select", "x", "from", "t"]

    def test_defaults_fold_strings(self):
        terms = normalize_tokens(tokenize_plsql("x := 'abc';"))
        assert terms == ["x", ":=", "~str~", ";"]

    def test_defaults_fold_numbers(self):
        terms = normalize_tokens(tokenize_plsql("y := 42;"))
        assert terms == ["y", ":=", "~num~", ";"]

    def test_all_false_options_is_identity(self):
        text = "-- c\nSELECT 'x' FROM t;"
        opts = NormalizationOptions(
            drop_comments=False,
            drop_whitespace=False,
            fold_string_literals=False,
            fold_number_literals=False,
            lowercase=False,
        )
        terms = normalize_tokens(tokenize_plsql(text), opts)
        assert "".join(terms) == text

    @settings(max_examples=200)
    @given(text=_SOUP)
    def test_defaults_never_emit_uppercase(self, text):
        for term in normalize_tokens(_tokenize_accepted(text)):
            assert term == term.lower()
            assert term  # no empty terms


class TestTermFrequency:
    def test_empty(self):
        assert term_frequency([]) == {}

    def test_counts(self):
        assert term_frequency(["a", "b", "a"]) == {"a": 2, "b": 1}

    def test_select_example(self):
        terms = normalize_tokens(tokenize_plsql("select x from t where x"))
        assert term_frequency(terms) == {
            "select": 1, "x": 2, "from": 1, "t": 1, "where": 1,
        }

    @settings(max_examples=200)
    @given(terms=st.lists(st.sampled_from(["a", "b", "c", "~str~"]), max_size=30))
    def test_total_count_equals_length(self, terms):
        counts = term_frequency(terms)
        assert sum(counts.values()) == len(terms)
        assert all(c > 0 for c in counts.values())
