#!/usr/bin/env python3
"""Content checks for generated mini-corpus translations.

Prints one "PASS name" / "FAIL name" line per check; the pipeline parses
this output as a plain-format test report. The stem of the generated file
name selects the check table.
"""

import sys
from pathlib import Path

CHECKS = {
    "alpha": [
        ("declares_class", "class GetC1"),
        ("has_getNaam", "getNaam"),
        ("null_guard", "if (klant == null)"),
        ("returns_null", "return null;"),
    ],
    "beta": [
        ("declares_class", "class AddSaldo"),
        ("reads_saldo", "getSaldo()"),
        ("adds_money", ".add(bedrag)"),
        ("saves_account", "saveAccount"),
    ],
    "gamma": [
        ("declares_class", "class CountActief"),
        ("iterates_customers", "allCustomers()"),
        ("null_safe_equals", "\"ACTIEF\".equals"),
        ("returns_total", "return totaal;"),
    ],
}


def main() -> int:
    path = Path(sys.argv[1])
    stem = path.name.split(".")[0]
    text = path.read_text(encoding="utf-8")
    for name, needle in CHECKS.get(stem, []):
        print(("PASS " if needle in text else "FAIL ") + name)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
