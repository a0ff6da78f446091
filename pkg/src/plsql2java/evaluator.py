"""Translation quality metrics: code preserved, tests passed, success rate.

Code preserved (CP) is the share of the generated file's normalized lines
that survive, in order, into the accepted file - a longest-common-subsequence
over lines that were stripped of surrounding whitespace, with blank lines
dropped. Tests passed (TP) comes from an external harness's report. The two
multiply into the success rate: SR = CP * TP / 100.
"""

from __future__ import annotations

import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from .corpus import SourceUnit
from .errors import RecordPairingError, ReportParseError

STRATEGY_ALL_SAMPLES = "all_samples"
STRATEGY_BEST_SUBSET = "best_subset"
STRATEGIES = (STRATEGY_ALL_SAMPLES, STRATEGY_BEST_SUBSET)

OUTCOME_IMPROVED = "improved"
OUTCOME_DECREASED = "decreased"
OUTCOME_UNCHANGED = "unchanged"

# SR differences within this many percentage points count as unchanged
OUTCOME_DELTA_PP = 0.5

REPORT_JUNIT_XML = "junit_xml"
REPORT_PLAIN = "plain"


@dataclass(frozen=True)
class TestReport:
    __test__ = False  # keep pytest from collecting this as a test class

    total: int
    passed: int
    failed: int
    case_names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if min(self.total, self.passed, self.failed) < 0:
            raise ValueError("test counts must be non-negative")
        if self.passed + self.failed != self.total:
            raise ValueError(
                f"passed ({self.passed}) + failed ({self.failed}) "
                f"!= total ({self.total})"
            )


@dataclass(frozen=True)
class EvaluationRecord:
    file_id: str
    strategy: str
    cp_percent: float
    tp_percent: float
    sr_percent: float

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        for name in ("cp_percent", "tp_percent", "sr_percent"):
            value = getattr(self, name)
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"{name} out of range: {value}")
        expected = self.cp_percent * self.tp_percent / 100.0
        if abs(self.sr_percent - expected) > 1e-9:
            raise ValueError(
                f"sr_percent {self.sr_percent} inconsistent with "
                f"CP*TP/100 = {expected}"
            )

    @classmethod
    def from_metrics(
        cls, file_id: str, strategy: str, cp: float, tp: float
    ) -> "EvaluationRecord":
        return cls(file_id, strategy, cp, tp, success_rate(cp, tp))


def normalized_lines(text: str) -> list[str]:
    """Strip surrounding whitespace per line and drop blank lines."""
    return [line.strip() for line in text.splitlines() if line.strip()]


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for item_a in a:
        current = [0] * (len(b) + 1)
        for j, item_b in enumerate(b, 1):
            if item_a == item_b:
                current[j] = previous[j - 1] + 1
            else:
                current[j] = max(current[j - 1], previous[j])
        previous = current
    return previous[-1]


def code_preserved(generated: SourceUnit, accepted: SourceUnit) -> float:
    """CP = 100 * |LCS(generated, accepted)| / |generated| over normalized lines."""
    gen_lines = normalized_lines(generated.text)
    acc_lines = normalized_lines(accepted.text)
    if not gen_lines:
        warnings.warn(
            f"generated file {generated.id} has no non-blank lines; CP = 0",
            stacklevel=2,
        )
        return 0.0
    return 100.0 * _lcs_length(gen_lines, acc_lines) / len(gen_lines)


def parse_test_report(path: Path | str, format: str) -> TestReport:
    """Read an external harness's report in junit_xml or plain PASS/FAIL form."""
    path = Path(path)
    if format == REPORT_JUNIT_XML:
        return _parse_junit_xml(path)
    if format == REPORT_PLAIN:
        return _parse_plain(path)
    raise ValueError(f"unknown report format {format!r}")


def _parse_junit_xml(path: Path) -> TestReport:
    try:
        tree = ET.parse(path)
    except ET.ParseError as exc:
        raise ReportParseError(f"{path.name}: malformed XML: {exc}") from exc
    suites = list(tree.iter("testsuite"))
    if not suites:
        raise ReportParseError(f"{path.name}: no testsuite elements found")
    total = failed = 0
    for suite in suites:
        try:
            tests = int(suite.get("tests", "0"))
            failures = int(suite.get("failures", "0"))
            errors = int(suite.get("errors", "0"))
        except ValueError as exc:
            raise ReportParseError(
                f"{path.name}: non-integer attribute on <testsuite "
                f"name={suite.get('name')!r}>: {exc}"
            ) from exc
        total += tests
        failed += failures + errors  # errors count as failed
    if failed > total:
        raise ReportParseError(
            f"{path.name}: failures+errors ({failed}) exceed tests ({total})"
        )
    return TestReport(total=total, passed=total - failed, failed=failed)


def _parse_plain(path: Path) -> TestReport:
    passed_names: list[str] = []
    failed_names: list[str] = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("PASS "):
            passed_names.append(line[5:].strip())
        elif line.startswith("FAIL "):
            failed_names.append(line[5:].strip())
    return TestReport(
        total=len(passed_names) + len(failed_names),
        passed=len(passed_names),
        failed=len(failed_names),
        case_names=tuple(passed_names + failed_names),
    )


def tests_passed(report: TestReport) -> float:
    """Percentage of test cases passed; 0 with a warning when none ran."""
    if report.total == 0:
        warnings.warn("test report contains no test cases; TP = 0", stacklevel=2)
        return 0.0
    return 100.0 * report.passed / report.total


def success_rate(cp: float, tp: float) -> float:
    """SR(%) = CP * TP / 100."""
    if not 0.0 <= cp <= 100.0:
        raise ValueError(f"cp out of [0, 100]: {cp}")
    if not 0.0 <= tp <= 100.0:
        raise ValueError(f"tp out of [0, 100]: {tp}")
    return cp * tp / 100.0


def classify_outcome(
    baseline: EvaluationRecord, candidate: EvaluationRecord
) -> str:
    """Compare strategies on one file: improved / decreased / unchanged."""
    if baseline.file_id != candidate.file_id:
        raise RecordPairingError(
            f"records compare different files: "
            f"{baseline.file_id!r} vs {candidate.file_id!r}"
        )
    delta = candidate.sr_percent - baseline.sr_percent
    if delta > OUTCOME_DELTA_PP:
        return OUTCOME_IMPROVED
    if delta < -OUTCOME_DELTA_PP:
        return OUTCOME_DECREASED
    return OUTCOME_UNCHANGED
