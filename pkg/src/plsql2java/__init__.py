"""Corpus-driven LLM translation pipeline for PL/SQL-to-Java.

Exemplar pairs are retrieved by cosine similarity over normalized PL/SQL
tokens, assembled into a three-part prompt (domain model, examples, query),
dispatched to a pluggable completion backend, and the result is scored with
code-preserved / tests-passed / success-rate metrics.
"""

from .corpus import (
    AnonymizationMap,
    Corpus,
    DomainModel,
    SourceUnit,
    TranslationPair,
    apply_anonymization,
    load_corpus,
    reverse_anonymization,
    validate_corpus,
)
from .evaluator import (
    EvaluationRecord,
    TestReport,
    classify_outcome,
    code_preserved,
    parse_test_report,
    success_rate,
    tests_passed,
)
from .lexer import (
    NormalizationOptions,
    Token,
    normalize_tokens,
    term_frequency,
    tokenize_plsql,
)
from .llmclient import (
    BackendConfig,
    CompletionResult,
    MockBackend,
    NetworkBackend,
    complete,
    extract_code_block,
)
from .prompt import (
    PromptBudget,
    PromptBundle,
    PromptTemplate,
    build_translation_prompt,
    enforce_budget,
    estimate_tokens,
    render_messages,
)
from .report import ChartSeries, RunRecord, emit_records, render_svg
from .similarity import (
    SelectionResult,
    SubsetConstraints,
    combine_vectors,
    cosine,
    enumerate_subsets,
    select_best_subset,
)

__version__ = "0.1.0"
