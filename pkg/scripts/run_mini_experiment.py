#!/usr/bin/env python3
"""Run the full two-strategy experiment on the bundled mini-corpus.

Uses the deterministic mock backend and a fixed clock, then prints where the
records and charts landed. Handy as a smoke test and as a template for
pointing the pipeline at a real corpus.

Usage:
    python3 scripts/run_mini_experiment.py [output_dir]
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from plsql2java.cli import main

REPO_ROOT = Path(__file__).resolve().parents[1]


def run() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else str(REPO_ROOT / "out" / "mini")
    return main([
        "experiment",
        "--config", str(REPO_ROOT / "corpus" / "mini" / "config.toml"),
        "--out", out,
        "--seed-clock", "2026-01-01T00:00:00Z",
    ])


if __name__ == "__main__":
    raise SystemExit(run())
