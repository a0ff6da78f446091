"""Pipeline behavior at the ten-pair corpus scale: ten exemplar pairs, a
fifteen-file domain model (ten classes, three interfaces, two records), ten
queries drawn from the pairs, nine candidates per query each, and the
502-subset search behind the best-subset strategy."""

from __future__ import annotations

import hashlib
from collections import Counter
from datetime import datetime, timezone
from pathlib import Path

import pytest

from plsql2java.cli import load_config, run_experiment
from plsql2java.corpus import load_corpus, validate_corpus
from plsql2java.lexer import normalize_tokens, term_frequency, tokenize_plsql
from plsql2java.prompt import build_translation_prompt
from plsql2java.similarity import SubsetConstraints, select_best_subset

_WORDS = [
    "klant", "rekening", "saldo", "boeking", "rente", "post", "munt",
    "koers", "limiet", "storting",
]


def _plsql_text(index: int) -> str:
    parts = [f"PROCEDURE verwerk_{_WORDS[index]}(p_id IN NUMBER) IS", "BEGIN"]
    for word in _WORDS[: index + 1]:
        parts.append(f"  UPDATE {word} SET versie = versie + 1 WHERE id = p_id;")
    parts.extend(["END;", ""])
    return "\n".join(parts)


def _build_ten_pair_corpus(root: Path) -> None:
    (root / "pairs").mkdir(parents=True)
    (root / "domain").mkdir()
    (root / "queries").mkdir()
    (root / "responses").mkdir()

    mock_lines = []
    for i in range(10):
        stem = f"{i:02d}_{_WORDS[i]}"
        text = _plsql_text(i)
        (root / "pairs" / f"{stem}.plsql").write_text(text, encoding="utf-8")
        (root / "pairs" / f"{stem}.java").write_text(
            f"public class Verwerk{i} {{\n    void run(long id) {{}}\n}}\n",
            encoding="utf-8",
        )
        (root / "queries" / f"{stem}.plsql").write_text(text, encoding="utf-8")
        (root / "responses" / f"{stem}.md").write_text(
            f"```java\npublic class Verwerk{i} {{\n    void run(long id) {{}}\n}}\n```\n",
            encoding="utf-8",
        )
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        mock_lines.append(f"{digest}\tresponses/{stem}.md")

    for i in range(10):
        (root / "domain" / f"Dom{i}.java").write_text(
            f"public class Dom{i} {{}}\n", encoding="utf-8")
    for i in range(3):
        (root / "domain" / f"Port{i}.java").write_text(
            f"public interface Port{i} {{}}\n", encoding="utf-8")
    for i in range(2):
        (root / "domain" / f"Val{i}.java").write_text(
            f"public record Val{i}(int a) {{}}\n", encoding="utf-8")

    (root / "mock_responses.tsv").write_text(
        "\n".join(mock_lines) + "\n", encoding="utf-8")
    (root / "harness.py").write_text(
        'print("PASS compiles")\nprint("PASS behaves")\n', encoding="utf-8")
    (root / "config.toml").write_text(
        'corpus_root = "."\noutput_dir = "out"\n'
        'test_command = "{python} harness.py {file}"\n'
        'test_report_format = "plain"\n'
        '[mock]\ntable_path = "mock_responses.tsv"\n'
        "[subset_constraints]\nmin_size = 2\n",
        encoding="utf-8",
    )


@pytest.fixture(scope="module")
def ten_pair_corpus(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("ten_pair")
    _build_ten_pair_corpus(root)
    return root


def test_ten_pair_corpus_counts(ten_pair_corpus):
    corpus = load_corpus(ten_pair_corpus)
    assert len(corpus.pairs) == 10
    assert len(corpus.domain_model.files) == 15
    assert len(corpus.queries) == 10
    assert Counter(corpus.domain_model.kinds) == {
        "class": 10, "interface": 3, "record": 2,
    }
    assert validate_corpus(corpus) == []


def test_nine_candidates_yield_502_subsets(ten_pair_corpus):
    corpus = load_corpus(ten_pair_corpus)
    stem = corpus.query_stems()[0]
    query_vec = term_frequency(normalize_tokens(tokenize_plsql(
        corpus.query_by_stem(stem).text)))
    candidates = [
        (p.pair_id, term_frequency(normalize_tokens(tokenize_plsql(p.source.text))))
        for p in corpus.pairs if p.pair_id != stem
    ]
    assert len(candidates) == 9
    result = select_best_subset(query_vec, candidates, SubsetConstraints(min_size=2))
    assert result.subsets_evaluated == 502


def test_nine_shot_prompt_section_arithmetic(ten_pair_corpus):
    corpus = load_corpus(ten_pair_corpus)
    stem = corpus.query_stems()[0]
    exemplars = [p for p in corpus.pairs if p.pair_id != stem]
    bundle = build_translation_prompt(
        corpus.domain_model, exemplars, corpus.query_by_stem(stem))
    # context + 15 domain files + 9 exemplars + query
    assert len(bundle.sections) == 1 + 15 + 9 + 1


def test_both_strategies_over_ten_queries(ten_pair_corpus, tmp_path):
    import dataclasses

    config = dataclasses.replace(
        load_config(ten_pair_corpus / "config.toml"), output_dir=tmp_path / "out")
    clock = lambda: datetime(2026, 1, 1, tzinfo=timezone.utc)
    records = run_experiment(config, clock=clock, notify=lambda _m: None)
    assert len(records) == 20
    assert {r.strategy for r in records} == {"all_samples", "best_subset"}
    for record in records:
        assert record.file_id not in record.chosen_exemplars
        if record.strategy == "all_samples":
            assert len(record.chosen_exemplars) == 9
    assert (config.output_dir / "similarity.svg").is_file()
    assert (config.output_dir / "scatter.svg").is_file()
