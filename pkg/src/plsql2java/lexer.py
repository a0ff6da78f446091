"""Lossless PL/SQL tokenizer and the normalization that feeds similarity.

The tokenizer is deliberately shallow: it never parses, it only slices the
input into a full-coverage token stream (concatenating the lexemes of the
stream reproduces the input byte for byte). Unknown characters become
single-character operator tokens so that exotic legacy syntax can never
hard-fail the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LexError

KIND_KEYWORD = "keyword"
KIND_IDENTIFIER = "identifier"
KIND_STRING = "string_literal"
KIND_NUMBER = "number_literal"
KIND_OPERATOR = "operator"
KIND_PUNCTUATION = "punctuation"
KIND_COMMENT = "comment"
KIND_WHITESPACE = "whitespace"

TOKEN_KINDS = frozenset({
    KIND_KEYWORD,
    KIND_IDENTIFIER,
    KIND_STRING,
    KIND_NUMBER,
    KIND_OPERATOR,
    KIND_PUNCTUATION,
    KIND_COMMENT,
    KIND_WHITESPACE,
})

# Oracle's reserved-word list plus the standard PL/SQL keywords; matched
# case-insensitively against identifier-shaped lexemes.
PLSQL_KEYWORDS = frozenset("""
    ALL ALTER AND ANY AS ASC AT BEGIN BETWEEN BY CASE CHECK CLUSTER CLUSTERS
    COLAUTH COLUMNS COMPRESS CONNECT CRASH CREATE CURRENT CURSOR DECLARE
    DEFAULT DELETE DESC DISTINCT DROP ELSE END EXCEPTION EXCLUSIVE EXISTS
    FETCH FOR FROM FUNCTION GOTO GRANT GROUP HAVING IDENTIFIED IF IN INDEX
    INDEXES INSERT INTERSECT INTO IS LIKE LOCK MINUS MODE NOCOMPRESS NOT
    NOWAIT NULL OF ON OPTION OR ORDER OVERLAPS PROCEDURE PUBLIC RESOURCE
    REVOKE SELECT SHARE SIZE SQL START SUBTYPE TABAUTH TABLE THEN TO TYPE
    UNION UNIQUE UPDATE VALUES VIEW VIEWS WHEN WHERE WITH
    BODY BOOLEAN BULK CHAR CLOB CLOSE COLLECT COMMIT CONSTANT CONTINUE DATE
    DETERMINISTIC ELSIF EXECUTE EXIT FALSE FORALL IMMEDIATE INTEGER LIMIT
    LOOP NOCOPY NUMBER OPEN OUT PACKAGE PRAGMA RAISE RECORD REF REPLACE
    RETURN RETURNING REVERSE ROLLBACK ROWTYPE SAVEPOINT TIMESTAMP TRUE
    USING VARCHAR VARCHAR2 WHILE
""".split())

# Longest match first; everything symbolic that is not punctuation.
_MULTI_CHAR_OPERATORS = (
    ":=", "=>", "<=", ">=", "<>", "!=", "~=", "^=", "||", "**", "..", "<<", ">>",
)

_PUNCTUATION = frozenset({";", ",", "(", ")", "."})

_IDENT_START = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz")
_IDENT_CHARS = _IDENT_START | frozenset("0123456789_#$")
_DIGITS = frozenset("0123456789")


@dataclass(frozen=True)
class Token:
    """One source slice; `span` is (start, end) in code units."""

    kind: str
    lexeme: str
    span: tuple[int, int]


@dataclass(frozen=True)
class NormalizationOptions:
    """Controls how a token stream is collapsed into similarity terms."""

    drop_comments: bool = True
    drop_whitespace: bool = True
    fold_string_literals: bool = True
    fold_number_literals: bool = True
    lowercase: bool = True


STRING_FOLD_TERM = "~str~"
NUMBER_FOLD_TERM = "~num~"


def tokenize_plsql(text: str) -> list[Token]:
    """Slice PL/SQL source into a lossless, full-coverage token stream.

    Recognizes: keywords (case-insensitive, fixed table), identifiers,
    single-quoted strings with '' escapes, numbers, -- line comments,
    /* */ block comments, multi-char operators, and punctuation. Raises
    LexError on unterminated strings or block comments. q-quote literals
    are not supported and lex as a plain identifier plus string.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)

    def emit(kind: str, start: int, end: int) -> None:
        tokens.append(Token(kind, text[start:end], (start, end)))

    while i < n:
        ch = text[i]

        if ch.isspace():
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            emit(KIND_WHITESPACE, i, j)
            i = j
            continue

        if ch == "-" and text.startswith("--", i):
            j = text.find("\n", i)
            j = n if j == -1 else j
            emit(KIND_COMMENT, i, j)
            i = j
            continue

        if ch == "/" and text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j == -1:
                raise LexError("unterminated block comment", i)
            emit(KIND_COMMENT, i, j + 2)
            i = j + 2
            continue

        if ch == "'":
            j = i + 1
            while True:
                if j >= n:
                    raise LexError("unterminated string literal", i)
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":
                        j += 2  # '' escape stays inside the literal
                        continue
                    j += 1
                    break
                j += 1
            emit(KIND_STRING, i, j)
            i = j
            continue

        if ch in _DIGITS:
            j = i + 1
            while j < n and text[j] in _DIGITS:
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1] in _DIGITS:
                j += 1
                while j < n and text[j] in _DIGITS:
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k] in _DIGITS:
                    j = k + 1
                    while j < n and text[j] in _DIGITS:
                        j += 1
            emit(KIND_NUMBER, i, j)
            i = j
            continue

        if ch in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_CHARS:
                j += 1
            word = text[i:j]
            kind = KIND_KEYWORD if word.upper() in PLSQL_KEYWORDS else KIND_IDENTIFIER
            emit(kind, i, j)
            i = j
            continue

        matched = False
        for op in _MULTI_CHAR_OPERATORS:
            if text.startswith(op, i):
                emit(KIND_OPERATOR, i, i + len(op))
                i += len(op)
                matched = True
                break
        if matched:
            continue

        if ch in _PUNCTUATION:
            emit(KIND_PUNCTUATION, i, i + 1)
        else:
            # anything else, including unexpected characters, is a
            # single-character operator so the stream stays lossless
            emit(KIND_OPERATOR, i, i + 1)
        i += 1

    return tokens


def normalize_tokens(
    tokens: list[Token], opts: NormalizationOptions = NormalizationOptions()
) -> list[str]:
    """Collapse a token stream into the ordered term list used for similarity."""
    terms: list[str] = []
    for tok in tokens:
        if tok.kind == KIND_COMMENT and opts.drop_comments:
            continue
        if tok.kind == KIND_WHITESPACE and opts.drop_whitespace:
            continue
        if tok.kind == KIND_STRING and opts.fold_string_literals:
            terms.append(STRING_FOLD_TERM)
            continue
        if tok.kind == KIND_NUMBER and opts.fold_number_literals:
            terms.append(NUMBER_FOLD_TERM)
            continue
        terms.append(tok.lexeme.lower() if opts.lowercase else tok.lexeme)
    return terms


def term_frequency(terms: list[str]) -> dict[str, int]:
    """Sparse term -> occurrence count map; absent terms are absent keys."""
    counts: dict[str, int] = {}
    for term in terms:
        counts[term] = counts.get(term, 0) + 1
    return counts


def dump_tokens(tokens: list[Token]) -> str:
    """Debug dump: one "kind<TAB>lexeme" line per token."""
    return "\n".join(f"{tok.kind}\t{tok.lexeme}" for tok in tokens)
