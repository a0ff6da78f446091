from __future__ import annotations

import shutil
from pathlib import Path

import pytest

from plsql2java.corpus import SourceUnit

REPO_ROOT = Path(__file__).resolve().parents[1]
MINI_CORPUS = REPO_ROOT / "corpus" / "mini"
MINI_CONFIG = MINI_CORPUS / "config.toml"
SNIPPET_DIR = Path(__file__).resolve().parent / "fixtures" / "lexer_snippets"


def make_unit(text: str, language: str = "plsql", unit_id: str = "u1") -> SourceUnit:
    return SourceUnit(id=unit_id, language=language, path=Path(unit_id), text=text)


@pytest.fixture
def mini_config_path() -> Path:
    return MINI_CONFIG


@pytest.fixture
def tmp_corpus(tmp_path: Path) -> Path:
    """A writable copy of the mini corpus for mutation tests."""
    dest = tmp_path / "mini"
    shutil.copytree(MINI_CORPUS, dest)
    return dest


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    out = tmp_path / "out"
    out.mkdir()
    return out
