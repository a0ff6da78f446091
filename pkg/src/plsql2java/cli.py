"""Pipeline orchestration and the command-line interface.

Subcommands mirror the pipeline stages: ingest, tokens, similarity, select,
prompt, translate, evaluate, report, experiment, and the interactive advise
loop. A single TOML config file drives everything; paths inside it resolve
relative to the config file's directory, and nothing is written outside the
output directory.

Exit codes: 0 success, 2 config/corpus error, 3 backend error,
4 evaluation error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import shlex
import subprocess
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence, TextIO

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import corpus as corpus_mod
from . import evaluator, llmclient, prompt as prompt_mod, report as report_mod
from . import similarity as similarity_mod
from .corpus import Corpus, SourceUnit, load_corpus, validate_corpus
from .errors import (
    BackendError,
    ChartConsistencyError,
    ConfigError,
    PipelineError,
    RecordPairingError,
    ReportParseError,
    StageError,
)
from .evaluator import (
    STRATEGIES,
    STRATEGY_ALL_SAMPLES,
    STRATEGY_BEST_SUBSET,
    EvaluationRecord,
    classify_outcome,
    code_preserved,
    parse_test_report,
    success_rate,
    tests_passed,
)
from .lexer import dump_tokens, normalize_tokens, term_frequency, tokenize_plsql
from .llmclient import BackendConfig, MockBackend, NetworkBackend, extract_code_block
from .prompt import (
    PromptBudget,
    PromptTemplate,
    build_translation_prompt,
    enforce_budget,
    render_messages,
)
from .report import RunRecord, emit_records
from .similarity import SubsetConstraints, combine_vectors, cosine, select_best_subset

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BACKEND = 3
EXIT_EVALUATION = 4

ADVISE_SYSTEM = (
    "You advise on prompting strategies for LLM-assisted code translation. "
    "Given the problem context, propose the best prompting strategy."
)
ADVISE_REQUEST = (
    "Given the context above, what prompting strategy should we use to "
    "translate these files? Answer with a concrete, numbered strategy."
)


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one run needs; built by load_config from a TOML file."""

    corpus_root: Path
    output_dir: Path
    backend: BackendConfig | None = None
    mock_table_path: Path | None = None
    subset_constraints: SubsetConstraints = SubsetConstraints()
    prompt_budget: PromptBudget = PromptBudget(max_tokens=16000, reserve_for_response=2000)
    template_path: Path | None = None
    test_command: str | None = None
    test_report_format: str = evaluator.REPORT_PLAIN
    config_dir: Path = Path(".")

    def __post_init__(self) -> None:
        if (self.backend is None) == (self.mock_table_path is None):
            raise ConfigError(
                "config must set exactly one of [backend] and [mock]"
            )
        if self.test_report_format not in (evaluator.REPORT_PLAIN,
                                           evaluator.REPORT_JUNIT_XML):
            raise ConfigError(
                f"unknown test_report_format {self.test_report_format!r}"
            )


@dataclass(frozen=True)
class StrategyAdvice:
    round: int
    context_sent: str
    advice_received: str
    accepted: bool


def load_config(path: Path | str) -> PipelineConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    base = path.parent

    def resolve(value: str) -> Path:
        p = Path(value)
        return p if p.is_absolute() else (base / p)

    try:
        corpus_root = resolve(data["corpus_root"])
        output_dir = resolve(data["output_dir"])
    except KeyError as exc:
        raise ConfigError(f"{path}: missing required key {exc.args[0]!r}") from exc

    backend = None
    if "backend" in data:
        known = {f.name for f in dataclasses.fields(BackendConfig)}
        extra = set(data["backend"]) - known
        if extra:
            raise ConfigError(f"{path}: unknown [backend] keys {sorted(extra)}")
        try:
            backend = BackendConfig(**data["backend"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}: bad [backend] section: {exc}") from exc

    mock_table_path = None
    if "mock" in data:
        try:
            mock_table_path = resolve(data["mock"]["table_path"])
        except KeyError as exc:
            raise ConfigError(f"{path}: [mock] needs table_path") from exc

    try:
        constraints = SubsetConstraints(**data.get("subset_constraints", {}))
        budget_data = data.get("prompt_budget", {})
        budget = PromptBudget(
            max_tokens=budget_data.get("max_tokens", 16000),
            reserve_for_response=budget_data.get("reserve_for_response", 2000),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    return PipelineConfig(
        corpus_root=corpus_root,
        output_dir=output_dir,
        backend=backend,
        mock_table_path=mock_table_path,
        subset_constraints=constraints,
        prompt_budget=budget,
        template_path=resolve(data["template_path"]) if "template_path" in data else None,
        test_command=data.get("test_command"),
        test_report_format=data.get("test_report_format", evaluator.REPORT_PLAIN),
        config_dir=base,
    )


def make_backend(config: PipelineConfig) -> llmclient.Backend:
    if config.mock_table_path is not None:
        try:
            table = llmclient.load_mock_table(config.mock_table_path)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot load mock table: {exc}") from exc
        return MockBackend(table)
    assert config.backend is not None
    return NetworkBackend(config.backend)


def load_template(config: PipelineConfig) -> PromptTemplate:
    if config.template_path is None:
        return PromptTemplate.default()
    return PromptTemplate.from_file(config.template_path)


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


# -- pipeline ------------------------------------------------------------------

def _term_vector(text: str) -> similarity_mod.TermVector:
    return term_frequency(normalize_tokens(tokenize_plsql(text)))


@dataclass(frozen=True)
class PreparedRun:
    """Everything computed before the backend call."""

    query: SourceUnit
    file_id: str
    chosen_ids: tuple[str, ...]
    similarity_score: float
    messages: list[tuple[str, str]]


def prepare_run(
    config: PipelineConfig,
    corpus: Corpus,
    query_id: str,
    strategy: str,
) -> PreparedRun:
    """Run every pipeline stage up to (but excluding) the backend call."""
    if strategy not in STRATEGIES:
        raise ConfigError(f"unknown strategy {strategy!r}")

    def stage(name: str, fn: Callable):
        try:
            return fn()
        except PipelineError as exc:
            raise StageError(name, exc) from exc

    query = stage("load", lambda: corpus.query_by_stem(query_id))
    candidates = [p for p in corpus.pairs if p.pair_id != query_id]
    if not candidates:
        raise StageError("select", ConfigError("corpus has no candidate exemplars"))

    query_vec = stage("tokenize", lambda: _term_vector(query.text))
    candidate_vecs = stage(
        "tokenize",
        lambda: [(p.pair_id, _term_vector(p.source.text)) for p in candidates],
    )

    if strategy == STRATEGY_BEST_SUBSET:
        selection = stage(
            "select",
            lambda: select_best_subset(query_vec, candidate_vecs,
                                       config.subset_constraints),
        )
        chosen_ids = selection.chosen_ids
        score = selection.score
    else:
        chosen_ids = tuple(sorted(p.pair_id for p in candidates))
        score = cosine(combine_vectors([v for _, v in candidate_vecs]), query_vec)

    by_id = {p.pair_id: p for p in candidates}
    exemplars = [by_id[cid] for cid in chosen_ids]
    template = stage("prompt", lambda: load_template(config))
    bundle = stage(
        "prompt",
        lambda: build_translation_prompt(corpus.domain_model, exemplars, query, template),
    )

    # evict the least query-similar exemplars first if over budget
    vec_by_id = dict(candidate_vecs)
    priorities = sorted(chosen_ids, key=lambda cid: (cosine(vec_by_id[cid], query_vec), cid))
    bundle = stage("budget", lambda: enforce_budget(bundle, config.prompt_budget, priorities))
    surviving = set(bundle.exemplar_ids())
    chosen_ids = tuple(cid for cid in chosen_ids if cid in surviving)

    messages = render_messages(bundle)
    return PreparedRun(query, query_id, chosen_ids, score, messages)


def run_pipeline(
    config: PipelineConfig,
    query_id: str,
    strategy: str,
    backend: llmclient.Backend | None = None,
    clock: Callable[[], datetime] = utc_now,
) -> RunRecord:
    """Full translate-and-evaluate pass for one query under one strategy."""
    corpus = _load_corpus_stage(config)
    prepared = prepare_run(config, corpus, query_id, strategy)
    backend = backend or make_backend(config)

    try:
        completion = llmclient.complete(backend, prepared.messages)
        generated_text = extract_code_block(completion.raw_text, "java")
    except BackendError as exc:
        raise StageError("complete", exc) from exc

    generated = SourceUnit(
        id=f"generated/{query_id}.{strategy}.java",
        language="java",
        path=config.output_dir / "generated" / f"{query_id}.{strategy}.java",
        text=generated_text,
    )
    if corpus.anonymization_map is not None:
        generated = corpus_mod.reverse_anonymization(generated, corpus.anonymization_map)

    generated.path.parent.mkdir(parents=True, exist_ok=True)
    generated.path.write_text(generated.text, encoding="utf-8")

    cp = tp = sr = None
    pair = corpus.pair_by_stem(query_id)
    if pair is not None:
        accepted = pair.target
        if corpus.anonymization_map is not None:
            accepted = corpus_mod.reverse_anonymization(accepted, corpus.anonymization_map)
        cp = code_preserved(generated, accepted)

    if config.test_command is not None:
        tp = _run_external_tests(config, generated.path, query_id, strategy)

    if cp is not None and tp is not None:
        sr = success_rate(cp, tp)

    record = RunRecord(
        file_id=query_id,
        strategy=strategy,
        chosen_exemplars=prepared.chosen_ids,
        similarity_score=prepared.similarity_score,
        cp_percent=cp,
        tp_percent=tp,
        sr_percent=sr,
        outcome=None,
        timestamp=clock(),
        backend_model=getattr(backend, "model_name", None) or
        (config.backend.model_name if config.backend else "mock"),
    )
    _persist_record(config, record)
    return record


def _load_corpus_stage(config: PipelineConfig) -> Corpus:
    try:
        return load_corpus(config.corpus_root)
    except PipelineError as exc:
        raise StageError("load", exc) from exc


def _run_external_tests(
    config: PipelineConfig, generated_path: Path, query_id: str, strategy: str
) -> float:
    """Run the configured harness; its stdout is the test report."""
    command = config.test_command.replace("{file}", shlex.quote(str(generated_path)))
    command = command.replace("{python}", shlex.quote(sys.executable))
    try:
        proc = subprocess.run(
            command, shell=True, capture_output=True, text=True,
            cwd=config.config_dir, timeout=300,
        )
    except (OSError, subprocess.TimeoutExpired) as exc:
        raise StageError("evaluate", ReportParseError(f"test command failed: {exc}"))

    report_dir = config.output_dir / "reports"
    report_dir.mkdir(parents=True, exist_ok=True)
    suffix = "xml" if config.test_report_format == evaluator.REPORT_JUNIT_XML else "txt"
    report_path = report_dir / f"{query_id}.{strategy}.{suffix}"
    report_path.write_text(proc.stdout, encoding="utf-8")
    try:
        test_report = parse_test_report(report_path, config.test_report_format)
    except ReportParseError as exc:
        raise StageError("evaluate", exc) from exc
    return tests_passed(test_report)


def _persist_record(config: PipelineConfig, record: RunRecord) -> Path:
    runs_dir = config.output_dir / "runs"
    runs_dir.mkdir(parents=True, exist_ok=True)
    out = runs_dir / f"{record.file_id}.{record.strategy}.json"
    out.write_text(
        json.dumps(report_mod.record_to_dict(record), indent=2) + "\n",
        encoding="utf-8",
    )
    return out


def run_experiment(
    config: PipelineConfig,
    clock: Callable[[], datetime] = utc_now,
    notify: Callable[[str], None] = lambda msg: print(msg, file=sys.stderr),
) -> list[RunRecord]:
    """Both strategies per query, outcome classification, records and charts."""
    corpus = _load_corpus_stage(config)
    backend = make_backend(config)
    config.output_dir.mkdir(parents=True, exist_ok=True)

    records: list[RunRecord] = []
    failures: list[tuple[str, str, Exception]] = []
    by_query: dict[str, dict[str, RunRecord]] = {}

    for stem in sorted(corpus.query_stems()):
        for strategy in (STRATEGY_ALL_SAMPLES, STRATEGY_BEST_SUBSET):
            try:
                record = run_pipeline(config, stem, strategy, backend=backend, clock=clock)
            except PipelineError as exc:
                failures.append((stem, strategy, exc))
                notify(f"notice: {stem}/{strategy} failed: {exc}")
                continue
            by_query.setdefault(stem, {})[strategy] = record

    for stem, runs in sorted(by_query.items()):
        baseline = runs.get(STRATEGY_ALL_SAMPLES)
        candidate = runs.get(STRATEGY_BEST_SUBSET)
        outcome = None
        if (
            baseline is not None and candidate is not None
            and baseline.sr_percent is not None and candidate.sr_percent is not None
        ):
            outcome = classify_outcome(
                EvaluationRecord(stem, baseline.strategy, baseline.cp_percent,
                                 baseline.tp_percent, baseline.sr_percent),
                EvaluationRecord(stem, candidate.strategy, candidate.cp_percent,
                                 candidate.tp_percent, candidate.sr_percent),
            )
        if baseline is not None:
            records.append(baseline)
        if candidate is not None:
            records.append(
                dataclasses.replace(candidate, outcome=outcome)
                if outcome is not None else candidate
            )

    if not records:
        first = failures[0][2] if failures else ConfigError("corpus has no queries")
        raise StageError("experiment", first if isinstance(first, PipelineError)
                         else ConfigError(str(first)))

    emit_records(records, "csv", config.output_dir / "records.csv")
    emit_records(records, "json", config.output_dir / "records.json")
    _emit_charts(config, corpus, records, by_query, notify)
    return records


def _emit_charts(
    config: PipelineConfig,
    corpus: Corpus,
    records: list[RunRecord],
    by_query: dict[str, dict[str, RunRecord]],
    notify: Callable[[str], None],
) -> None:
    if all(r.cp_percent is None for r in records):
        notify("notice: no accepted files found; charts skipped")
        return

    per_file = [
        (stem, runs[STRATEGY_ALL_SAMPLES].similarity_score,
         runs[STRATEGY_BEST_SUBSET].similarity_score)
        for stem, runs in sorted(by_query.items())
        if STRATEGY_ALL_SAMPLES in runs and STRATEGY_BEST_SUBSET in runs
    ]
    # the consistency invariant only binds when the full candidate set was
    # inside the search space for every query
    enforce = all(
        _full_set_in_search_space(config.subset_constraints,
                                  len(corpus.pairs) - (1 if corpus.pair_by_stem(stem) else 0))
        for stem, _, _ in per_file
    )
    bar_series = report_mod.similarity_chart_data(per_file, enforce_consistency=enforce)
    if bar_series:
        report_mod.render_svg(bar_series, "bars", config.output_dir / "similarity.svg")
    else:
        notify("notice: no per-file similarity scores; similarity chart skipped")

    scatter = [s for s in report_mod.scatter_chart_data(records) if s.points]
    if scatter:
        report_mod.render_svg(scatter, "scatter", config.output_dir / "scatter.svg")
    else:
        notify("notice: no records with both CP and TP; scatter chart skipped")


def _full_set_in_search_space(constraints: SubsetConstraints, n_candidates: int) -> bool:
    if n_candidates < constraints.min_size:
        return False
    return constraints.max_size is None or constraints.max_size >= n_candidates


def advise_strategy(
    config: PipelineConfig,
    context_path: Path | str,
    stdin: TextIO | None = None,
    stdout: TextIO | None = None,
) -> list[StrategyAdvice]:
    """Interactive chain-of-guidance loop; every round is archived.

    The operator reviews each proposed strategy and either accepts it (ending
    the session) or edits the context file and resends. Explicit streams may
    be passed for scripting; otherwise a real terminal is required.
    """
    if stdin is None or stdout is None:
        if not sys.stdin.isatty():
            raise ConfigError(
                "advise needs an interactive terminal; "
                "use the translate/experiment subcommands for batch runs"
            )
        stdin = sys.stdin
        stdout = sys.stdout

    backend = make_backend(config)
    archive_dir = config.output_dir / "advice"
    archive_dir.mkdir(parents=True, exist_ok=True)
    context_path = Path(context_path)

    rounds: list[StrategyAdvice] = []
    round_no = 1
    while True:
        context_text = context_path.read_text(encoding="utf-8")
        messages = [
            ("system", ADVISE_SYSTEM),
            ("user", f"{context_text}\n\n{ADVISE_REQUEST}"),
        ]
        try:
            completion = llmclient.complete(backend, messages)
        except BackendError as exc:
            raise StageError("advise", exc) from exc

        stdout.write(f"--- proposed strategy (round {round_no}) ---\n")
        stdout.write(completion.raw_text.rstrip() + "\n")
        stdout.write("Accept this strategy? [y/N] ")
        stdout.flush()
        answer = stdin.readline().strip().lower()
        accepted = answer in ("y", "yes")

        advice = StrategyAdvice(round_no, context_text, completion.raw_text, accepted)
        rounds.append(advice)
        (archive_dir / f"round_{round_no}.json").write_text(
            json.dumps(dataclasses.asdict(advice), indent=2) + "\n",
            encoding="utf-8",
        )
        if accepted:
            stdout.write("strategy accepted and archived\n")
            return rounds

        stdout.write(
            f"edit {context_path} and press Enter to resend "
            "(or type a new context path): "
        )
        stdout.flush()
        reply = stdin.readline()
        if not reply:
            return rounds
        reply = reply.strip()
        if reply:
            context_path = Path(reply)
        round_no += 1


# -- CLI ------------------------------------------------------------------------

def _parse_seed_clock(value: str) -> Callable[[], datetime]:
    try:
        instant = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError as exc:
        raise ConfigError(f"bad --seed-clock value {value!r}: {exc}") from exc
    if instant.tzinfo is None:
        instant = instant.replace(tzinfo=timezone.utc)
    return lambda: instant


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plsql2java",
        description="Corpus-driven LLM translation pipeline for PL/SQL to Java",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to the pipeline TOML config")
    common.add_argument("--out", help="override the configured output directory")
    common.add_argument("--seed-clock", metavar="ISO8601",
                        help="fixed UTC timestamp for deterministic records")

    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ingest", parents=[common],
                   help="load and validate the corpus")

    p_tokens = sub.add_parser("tokens", parents=[common],
                              help="dump tokens as kind<TAB>lexeme lines")
    p_tokens.add_argument("--query", help="query stem to tokenize")
    p_tokens.add_argument("--file", help="tokenize an arbitrary PL/SQL file")

    p_sim = sub.add_parser("similarity", parents=[common],
                           help="score every exemplar subset against a query")
    p_sim.add_argument("--query", required=True)

    p_select = sub.add_parser("select", parents=[common],
                              help="print the best exemplar subset for a query")
    p_select.add_argument("--query", required=True)

    p_prompt = sub.add_parser("prompt", parents=[common],
                              help="render the prompt for a query to stdout")
    p_prompt.add_argument("--query")
    p_prompt.add_argument("--strategy", choices=("all", "best"), default="best")
    p_prompt.add_argument("--dump-template", action="store_true",
                          help="print the built-in prompt template and exit")

    p_translate = sub.add_parser("translate", parents=[common],
                                 help="translate one query end to end")
    p_translate.add_argument("--query", required=True)
    p_translate.add_argument("--strategy", choices=("all", "best"), default="best")
    p_translate.add_argument("--dry-run", action="store_true",
                             help="stop before the backend call and print the prompt")

    p_eval = sub.add_parser("evaluate", parents=[common],
                            help="compute CP/TP/SR for given files")
    p_eval.add_argument("--generated", required=True)
    p_eval.add_argument("--accepted")
    p_eval.add_argument("--test-report")

    p_report = sub.add_parser("report", parents=[common],
                              help="regenerate charts from an emitted records file")
    p_report.add_argument("--records", required=True,
                          help="path to records.json or records.csv")

    sub.add_parser("experiment", parents=[common],
                   help="run both strategies over every query and emit reports")

    p_advise = sub.add_parser("advise", parents=[common],
                              help="interactive prompting-strategy loop")
    p_advise.add_argument("--context", required=True,
                          help="path to the problem-context file")

    return parser


def _require_config(args: argparse.Namespace) -> PipelineConfig:
    if not args.config:
        raise ConfigError("--config is required")
    config = load_config(args.config)
    if getattr(args, "out", None):
        config = dataclasses.replace(config, output_dir=Path(args.out))
    return config


def _strategy_name(flag: str) -> str:
    return STRATEGY_ALL_SAMPLES if flag == "all" else STRATEGY_BEST_SUBSET


def _print_record(record: RunRecord) -> None:
    def fmt(v: float | None) -> str:
        return "absent" if v is None else f"{v:.2f}"

    print(f"file:       {record.file_id}")
    print(f"strategy:   {record.strategy}")
    print(f"exemplars:  {'+'.join(record.chosen_exemplars)}")
    print(f"similarity: {record.similarity_score:.6f}")
    print(f"CP/TP/SR:   {fmt(record.cp_percent)} / {fmt(record.tp_percent)} / "
          f"{fmt(record.sr_percent)}")


def _cmd_ingest(args: argparse.Namespace) -> int:
    config = _require_config(args)
    corpus = load_corpus(config.corpus_root)
    issues = validate_corpus(corpus)
    print(f"pairs: {len(corpus.pairs)}  domain files: "
          f"{len(corpus.domain_model.files)}  queries: {len(corpus.queries)}")
    if corpus.anonymization_map is not None:
        print(f"anonymization entries: {len(corpus.anonymization_map.entries)}")
    for issue in issues:
        print(f"issue: {issue.reason}: {issue.unit_id} {issue.detail}".rstrip())
    print("corpus OK" if not issues else f"{len(issues)} issue(s) found")
    return EXIT_OK if not issues else EXIT_CONFIG


def _cmd_tokens(args: argparse.Namespace) -> int:
    if args.file:
        text = Path(args.file).read_text(encoding="utf-8")
    else:
        if not args.query:
            raise ConfigError("tokens needs --query or --file")
        config = _require_config(args)
        corpus = load_corpus(config.corpus_root)
        text = corpus.query_by_stem(args.query).text
    print(dump_tokens(tokenize_plsql(text)))
    return EXIT_OK


def _selection_for_query(config: PipelineConfig, query_id: str, keep_scores: bool):
    corpus = load_corpus(config.corpus_root)
    query = corpus.query_by_stem(query_id)
    candidates = [p for p in corpus.pairs if p.pair_id != query_id]
    if not candidates:
        raise ConfigError("corpus has no candidate exemplars")
    query_vec = _term_vector(query.text)
    candidate_vecs = [(p.pair_id, _term_vector(p.source.text)) for p in candidates]
    return select_best_subset(query_vec, candidate_vecs, config.subset_constraints,
                              keep_all_scores=keep_scores)


def _cmd_similarity(args: argparse.Namespace) -> int:
    config = _require_config(args)
    result = _selection_for_query(config, args.query, keep_scores=True)
    csv_text = similarity_mod.scores_csv(result)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        out_path = out_dir / f"similarity_scores_{args.query}.csv"
        out_path.write_text(csv_text, encoding="utf-8")
        print(f"wrote {out_path}")
    else:
        print(csv_text, end="")
    return EXIT_OK


def _cmd_select(args: argparse.Namespace) -> int:
    config = _require_config(args)
    result = _selection_for_query(config, args.query, keep_scores=False)
    print(f"chosen: {'+'.join(result.chosen_ids)}")
    print(f"score: {result.score:.9f}")
    print(f"subsets evaluated: {result.subsets_evaluated}")
    return EXIT_OK


def _render_prompt_text(messages: list[tuple[str, str]]) -> str:
    parts = []
    for role, content in messages:
        parts.append(f"=== {role} ===\n{content}")
    return "\n\n".join(parts)


def _cmd_prompt(args: argparse.Namespace) -> int:
    if args.dump_template:
        print(prompt_mod.DEFAULT_TEMPLATE_TEXT, end="")
        return EXIT_OK
    if not args.query:
        raise ConfigError("prompt needs --query (or --dump-template)")
    config = _require_config(args)
    corpus = _load_corpus_stage(config)
    prepared = prepare_run(config, corpus, args.query, _strategy_name(args.strategy))
    print(_render_prompt_text(prepared.messages))
    return EXIT_OK


def _cmd_translate(args: argparse.Namespace) -> int:
    config = _require_config(args)
    strategy = _strategy_name(args.strategy)
    if args.dry_run:
        corpus = _load_corpus_stage(config)
        prepared = prepare_run(config, corpus, args.query, strategy)
        print(_render_prompt_text(prepared.messages))
        print("\n--- dry run: stopped before backend call ---")
        return EXIT_OK
    clock = _parse_seed_clock(args.seed_clock) if args.seed_clock else utc_now
    record = run_pipeline(config, args.query, strategy, clock=clock)
    _print_record(record)
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    config = _require_config(args)
    generated_path = Path(args.generated)
    generated = SourceUnit("generated", "java", generated_path,
                           generated_path.read_text(encoding="utf-8"))
    cp = tp = None
    if args.accepted:
        accepted_path = Path(args.accepted)
        accepted = SourceUnit("accepted", "java", accepted_path,
                              accepted_path.read_text(encoding="utf-8"))
        cp = code_preserved(generated, accepted)
        print(f"CP: {cp:.4f}")
    if args.test_report:
        tp = tests_passed(parse_test_report(args.test_report, config.test_report_format))
        print(f"TP: {tp:.4f}")
    if cp is not None and tp is not None:
        print(f"SR: {success_rate(cp, tp):.4f}")
    if cp is None and tp is None:
        raise ConfigError("evaluate needs --accepted and/or --test-report")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    config = _require_config(args)
    records_path = Path(args.records)
    if records_path.suffix == ".csv":
        records = report_mod.read_records_csv(records_path)
    else:
        records = report_mod.read_records_json(records_path)
    out_dir = Path(args.out) if args.out else config.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    scatter = [s for s in report_mod.scatter_chart_data(records) if s.points]
    if scatter:
        report_mod.render_svg(scatter, "scatter", out_dir / "scatter.svg")
        print(f"wrote {out_dir / 'scatter.svg'}")
    else:
        print("notice: no records with both CP and TP; scatter chart skipped",
              file=sys.stderr)

    by_query: dict[str, dict[str, float]] = {}
    for record in records:
        by_query.setdefault(record.file_id, {})[record.strategy] = record.similarity_score
    per_file = [
        (fid, scores[STRATEGY_ALL_SAMPLES], scores[STRATEGY_BEST_SUBSET])
        for fid, scores in sorted(by_query.items())
        if STRATEGY_ALL_SAMPLES in scores and STRATEGY_BEST_SUBSET in scores
    ]
    bars = report_mod.similarity_chart_data(per_file, enforce_consistency=False)
    if bars:
        report_mod.render_svg(bars, "bars", out_dir / "similarity.svg")
        print(f"wrote {out_dir / 'similarity.svg'}")
    return EXIT_OK


def _cmd_experiment(args: argparse.Namespace) -> int:
    config = _require_config(args)
    clock = _parse_seed_clock(args.seed_clock) if args.seed_clock else utc_now
    records = run_experiment(config, clock=clock)
    outcomes = [r.outcome for r in records if r.outcome is not None]
    print(f"{len(records)} run records emitted to {config.output_dir}")
    if outcomes:
        for value in ("improved", "decreased", "unchanged"):
            print(f"{value}: {outcomes.count(value)}")
    return EXIT_OK


def _cmd_advise(args: argparse.Namespace) -> int:
    config = _require_config(args)
    rounds = advise_strategy(config, args.context)
    print(f"{len(rounds)} round(s) archived to {config.output_dir / 'advice'}")
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "tokens": _cmd_tokens,
    "similarity": _cmd_similarity,
    "select": _cmd_select,
    "prompt": _cmd_prompt,
    "translate": _cmd_translate,
    "evaluate": _cmd_evaluate,
    "report": _cmd_report,
    "experiment": _cmd_experiment,
    "advise": _cmd_advise,
}


def exit_code_for(exc: PipelineError) -> int:
    while isinstance(exc, StageError) and isinstance(exc.cause, PipelineError):
        exc = exc.cause
    if isinstance(exc, BackendError):
        return EXIT_BACKEND
    if isinstance(exc, (ReportParseError, RecordPairingError, ChartConsistencyError)):
        return EXIT_EVALUATION
    return EXIT_CONFIG


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
