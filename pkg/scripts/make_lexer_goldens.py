#!/usr/bin/env python3
"""Regenerate the golden token dumps for the lexer snippet corpus.

Golden format: one "kind<TAB>json-encoded-lexeme" line per token, so
multi-line lexemes (block comments) stay one line per token and diffs stay
readable. Run from the repo root after a deliberate lexer change, then
review the diff before committing.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from plsql2java.lexer import tokenize_plsql

SNIPPET_DIR = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "lexer_snippets"


def golden_dump(text: str) -> str:
    return "\n".join(
        f"{tok.kind}\t{json.dumps(tok.lexeme)}" for tok in tokenize_plsql(text)
    ) + "\n"


def main() -> int:
    for snippet in sorted(SNIPPET_DIR.glob("*.plsql")):
        golden = snippet.with_suffix(".tokens")
        golden.write_text(golden_dump(snippet.read_text(encoding="utf-8")),
                          encoding="utf-8")
        print(f"wrote {golden.name}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
