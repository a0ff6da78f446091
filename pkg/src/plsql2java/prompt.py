"""Three-part prompt assembly: domain model, exemplar pairs, then the query.

A PromptBundle keeps the parts as separate sections so budget enforcement can
evict individual exemplars; render_messages flattens the survivors into a
(system, user) message pair through the bundle's template. The template text
up to and including the {{CONTEXT}} placeholder renders the system message;
the remainder renders the user message, so {{QUERY}} should stay last (the
mock backend identifies the query by the final fenced block).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .corpus import DomainModel, SourceUnit, TranslationPair, query_stem
from .errors import BudgetExceededError, TemplateError

SECTION_CONTEXT = "context"
SECTION_DOMAIN_MODEL = "domain_model"
SECTION_EXEMPLAR = "exemplar_pair"
SECTION_QUERY = "query"

ROLE_SYSTEM = "system"
ROLE_USER = "user"
ROLE_ASSISTANT = "assistant"

PLACEHOLDERS = ("{{CONTEXT}}", "{{DOMAIN_MODEL}}", "{{EXEMPLARS}}", "{{QUERY}}")

DEFAULT_CONTEXT = (
    "You are an expert software engineer migrating a legacy Oracle PL/SQL "
    "codebase to Java. This prompt has three parts: the Java domain model the "
    "translation must conform to, worked PL/SQL-to-Java translation examples, "
    "and finally one PL/SQL file to translate."
)

REPLY_INSTRUCTION = (
    "Answer with exactly one fenced ```java code block containing the "
    "complete translated file, and nothing else."
)

QUERY_INSTRUCTION = "Give me the Java translation of the following PL/SQL file:"

ZERO_SHOT_WARNING = "[warning: no translation examples provided; zero-shot prompt]"

DEFAULT_TEMPLATE_TEXT = """{{CONTEXT}}

## Domain model

{{DOMAIN_MODEL}}

## Translation examples

{{EXEMPLARS}}

## Task

{{QUERY}}
"""


@dataclass(frozen=True)
class PromptTemplate:
    text: str

    def __post_init__(self) -> None:
        for placeholder in PLACEHOLDERS:
            if self.text.count(placeholder) != 1:
                raise TemplateError(
                    f"template must contain {placeholder} exactly once"
                )
        if self.text.index("{{CONTEXT}}") > self.text.index("{{DOMAIN_MODEL}}"):
            raise TemplateError("{{CONTEXT}} must precede {{DOMAIN_MODEL}}")

    @classmethod
    def default(cls) -> "PromptTemplate":
        return cls(DEFAULT_TEMPLATE_TEXT)

    @classmethod
    def from_file(cls, path: Path | str) -> "PromptTemplate":
        return cls(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class PromptSection:
    kind: str
    heading: str
    body: str


@dataclass(frozen=True)
class PromptBundle:
    sections: tuple[PromptSection, ...]
    estimated_tokens: int
    template: PromptTemplate

    def exemplar_ids(self) -> list[str]:
        return [s.heading for s in self.sections if s.kind == SECTION_EXEMPLAR]


@dataclass(frozen=True)
class PromptBudget:
    max_tokens: int
    reserve_for_response: int = 0

    def __post_init__(self) -> None:
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")
        if not 0 <= self.reserve_for_response < self.max_tokens:
            raise ValueError("reserve_for_response must be in [0, max_tokens)")


Message = tuple[str, str]


def estimate_tokens(text: str) -> int:
    """Chars/4 heuristic, rounded up; monotone in text length."""
    return (len(text) + 3) // 4


def fenced(text: str, tag: str) -> str:
    return f"```{tag}\n{text}\n```"


def unfence(block: str) -> str:
    """Inverse of fenced(): drop the first and last lines."""
    lines = block.split("\n")
    return "\n".join(lines[1:-1])


def _bundle_tokens(sections: tuple[PromptSection, ...]) -> int:
    return sum(
        estimate_tokens(s.heading) + estimate_tokens(s.body) for s in sections
    )


def build_translation_prompt(
    domain_model: DomainModel,
    exemplars: list[TranslationPair],
    query: SourceUnit,
    template: PromptTemplate | None = None,
) -> PromptBundle:
    """Assemble sections in the mandated order: context, domain, exemplars, query."""
    if query.language != "plsql":
        raise ValueError(f"query {query.id} must be plsql, got {query.language}")
    template = template or PromptTemplate.default()

    context_body = DEFAULT_CONTEXT
    if not exemplars:
        context_body = f"{context_body}\n\n{ZERO_SHOT_WARNING}"
    sections: list[PromptSection] = [
        PromptSection(SECTION_CONTEXT, "Context", context_body)
    ]

    for unit in domain_model.files:
        name = unit.path.name if unit.path else unit.id
        sections.append(
            PromptSection(SECTION_DOMAIN_MODEL, unit.id,
                          f"{name}\n{fenced(unit.text, 'java')}")
        )

    for pair in exemplars:
        body = (
            f"{pair.pair_id}.plsql\n{fenced(pair.source.text, 'plsql')}\n\n"
            f"{pair.pair_id}.java\n{fenced(pair.target.text, 'java')}"
        )
        sections.append(PromptSection(SECTION_EXEMPLAR, pair.pair_id, body))

    stem = query_stem(query)
    query_body = (
        f"{QUERY_INSTRUCTION} {stem}.plsql\n\n{fenced(query.text, 'plsql')}"
    )
    sections.append(PromptSection(SECTION_QUERY, stem, query_body))

    parts = tuple(sections)
    return PromptBundle(parts, _bundle_tokens(parts), template)


def render_messages(bundle: PromptBundle) -> list[Message]:
    """Flatten a bundle into exactly two messages: (system, user).

    The system message carries the context plus the fenced-reply instruction;
    the user message carries domain model, exemplars, and the query, laid out
    by the bundle's template.
    """
    by_kind: dict[str, list[PromptSection]] = {}
    for section in bundle.sections:
        by_kind.setdefault(section.kind, []).append(section)

    context = by_kind[SECTION_CONTEXT][0].body
    domain_text = "\n\n".join(s.body for s in by_kind.get(SECTION_DOMAIN_MODEL, []))
    exemplar_text = "\n\n".join(s.body for s in by_kind.get(SECTION_EXEMPLAR, []))
    query_text = by_kind[SECTION_QUERY][0].body

    text = bundle.template.text
    split_at = text.index("{{CONTEXT}}") + len("{{CONTEXT}}")
    head, tail = text[:split_at], text[split_at:]

    def substitute(part: str) -> str:
        return (
            part.replace("{{CONTEXT}}", context)
            .replace("{{DOMAIN_MODEL}}", domain_text)
            .replace("{{EXEMPLARS}}", exemplar_text)
            .replace("{{QUERY}}", query_text)
        )

    system_content = f"{substitute(head).strip()}\n\n{REPLY_INSTRUCTION}"
    user_content = substitute(tail).strip()
    return [(ROLE_SYSTEM, system_content), (ROLE_USER, user_content)]


def enforce_budget(
    bundle: PromptBundle,
    budget: PromptBudget,
    priorities: list[str],
) -> PromptBundle:
    """Evict exemplar sections, worst priority first, until the bundle fits.

    `priorities` lists exemplar ids worst-first and must cover every exemplar
    section. Context, domain model, and query are never removed; if the
    bundle still exceeds the budget with no exemplars left, raises
    BudgetExceededError with the overflow.
    """
    exemplar_ids = set(bundle.exemplar_ids())
    missing = exemplar_ids - set(priorities)
    if missing:
        raise ValueError(f"priorities missing exemplar ids: {sorted(missing)}")

    allowed = budget.max_tokens - budget.reserve_for_response
    sections = bundle.sections
    tokens = _bundle_tokens(sections)
    evict_queue = [pid for pid in priorities if pid in exemplar_ids]

    while tokens > allowed and evict_queue:
        victim = evict_queue.pop(0)
        sections = tuple(
            s for s in sections
            if not (s.kind == SECTION_EXEMPLAR and s.heading == victim)
        )
        tokens = _bundle_tokens(sections)

    if tokens > allowed:
        raise BudgetExceededError(tokens - allowed)
    if sections is bundle.sections:
        return bundle
    return replace(bundle, sections=sections, estimated_tokens=tokens)
