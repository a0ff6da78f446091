"""Translation-corpus loading, validation, and identifier (de)anonymization.

Corpus layout on disk::

    root/pairs/<stem>.plsql + root/pairs/<stem>.java   one exemplar per stem
    root/domain/<name>.java                            domain-model files
    root/queries/<stem>.plsql                          files to translate
    root/anonymization.map                             optional, "original<TAB>alias" lines

Unit ids are POSIX-style paths relative to the corpus root, which makes them
unique by construction; pair and query *stems* are the short names used
everywhere else in the pipeline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusLayoutError, PairingError, UnknownQueryError

LANG_PLSQL = "plsql"
LANG_JAVA = "java"

DOMAIN_KINDS = ("class", "interface", "record")

# identifier alphabets used for token-boundary-aware replacement
_BOUNDARY_CHARS = {
    LANG_PLSQL: r"A-Za-z0-9_#$",
    LANG_JAVA: r"A-Za-z0-9_",
}


@dataclass(frozen=True)
class SourceUnit:
    """One code file flowing through the pipeline."""

    id: str
    language: str
    path: Path
    text: str

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("SourceUnit id must be non-empty")
        if self.language not in (LANG_PLSQL, LANG_JAVA):
            raise ValueError(f"unsupported language {self.language!r}")


@dataclass(frozen=True)
class TranslationPair:
    """A PL/SQL file bound to its accepted Java counterpart."""

    pair_id: str
    source: SourceUnit
    target: SourceUnit

    def __post_init__(self) -> None:
        if self.source.language != LANG_PLSQL:
            raise ValueError(f"pair {self.pair_id}: source must be plsql")
        if self.target.language != LANG_JAVA:
            raise ValueError(f"pair {self.pair_id}: target must be java")


@dataclass(frozen=True)
class DomainModel:
    """Target-language files the translation must conform to."""

    files: tuple[SourceUnit, ...]
    kinds: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.files) != len(self.kinds):
            raise ValueError("files and kinds must be the same length")


@dataclass(frozen=True)
class AnonymizationMap:
    """Ordered identifier -> alias rewrites; validated against cycles."""

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        originals = [orig for orig, _ in self.entries]
        aliases = [alias for _, alias in self.entries]
        if any(not orig or not alias for orig, alias in self.entries):
            raise ValueError("map entries must be non-empty strings")
        if len(set(originals)) != len(originals):
            raise ValueError("original identifiers must be pairwise distinct")
        if len(set(aliases)) != len(aliases):
            raise ValueError("aliases must be pairwise distinct")
        overlap = set(originals) & set(aliases)
        if overlap:
            raise ValueError(
                f"alias equals an original identifier: {sorted(overlap)}"
            )

    def inverse(self) -> "AnonymizationMap":
        return AnonymizationMap(tuple((a, o) for o, a in self.entries))


@dataclass(frozen=True)
class Corpus:
    pairs: tuple[TranslationPair, ...]
    domain_model: DomainModel
    queries: tuple[SourceUnit, ...]
    anonymization_map: AnonymizationMap | None = None
    root: Path | None = None

    def pair_by_stem(self, stem: str) -> TranslationPair | None:
        for pair in self.pairs:
            if pair.pair_id == stem:
                return pair
        return None

    def query_by_stem(self, stem: str) -> SourceUnit:
        for unit in self.queries:
            if query_stem(unit) == stem:
                return unit
        raise UnknownQueryError(f"no query named {stem!r} in the corpus")

    def query_stems(self) -> list[str]:
        return [query_stem(u) for u in self.queries]


@dataclass(frozen=True)
class ValidationIssue:
    unit_id: str
    reason: str
    detail: str = ""


def query_stem(unit: SourceUnit) -> str:
    return Path(unit.id).stem


def _read_unit(root: Path, rel: Path, language: str) -> SourceUnit:
    path = root / rel
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusLayoutError(f"{rel.as_posix()}: not valid UTF-8: {exc}") from exc
    return SourceUnit(id=rel.as_posix(), language=language, path=path, text=text)


def infer_domain_kind(text: str) -> str:
    """First of class/interface/record appearing as a whole word wins."""
    match = re.search(r"\b(class|interface|record)\b", text)
    return match.group(1) if match else "class"


def load_anonymization_map(path: Path) -> AnonymizationMap:
    """Parse "original<TAB>alias" lines; blank lines are skipped."""
    entries: list[tuple[str, str]] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").split("\n"), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise CorpusLayoutError(
                f"{path.name}:{lineno}: expected 'original<TAB>alias', got {line!r}"
            )
        entries.append((parts[0], parts[1]))
    try:
        return AnonymizationMap(tuple(entries))
    except ValueError as exc:
        raise CorpusLayoutError(f"{path.name}: {exc}") from exc


def load_corpus(root: Path | str) -> Corpus:
    """Load and join the corpus tree; deterministic ordering throughout."""
    root = Path(root)
    if not root.is_dir():
        raise CorpusLayoutError(f"corpus root {root} is not a directory")
    pairs_dir = root / "pairs"
    domain_dir = root / "domain"
    queries_dir = root / "queries"
    for required in (pairs_dir, domain_dir, queries_dir):
        if not required.is_dir():
            raise CorpusLayoutError(f"missing corpus directory {required}")

    plsql_stems = {p.stem for p in pairs_dir.glob("*.plsql")}
    java_stems = {p.stem for p in pairs_dir.glob("*.java")}
    for orphan in sorted(plsql_stems ^ java_stems):
        raise PairingError(orphan)

    pairs = tuple(
        TranslationPair(
            pair_id=stem,
            source=_read_unit(root, Path("pairs") / f"{stem}.plsql", LANG_PLSQL),
            target=_read_unit(root, Path("pairs") / f"{stem}.java", LANG_JAVA),
        )
        for stem in sorted(plsql_stems)
    )

    domain_files = tuple(
        _read_unit(root, Path("domain") / p.name, LANG_JAVA)
        for p in sorted(domain_dir.glob("*.java"), key=lambda p: p.name)
    )
    domain = DomainModel(
        files=domain_files,
        kinds=tuple(infer_domain_kind(unit.text) for unit in domain_files),
    )

    queries = tuple(
        _read_unit(root, Path("queries") / p.name, LANG_PLSQL)
        for p in sorted(queries_dir.glob("*.plsql"), key=lambda p: p.name)
    )

    map_path = root / "anonymization.map"
    anon_map = load_anonymization_map(map_path) if map_path.is_file() else None

    return Corpus(
        pairs=pairs,
        domain_model=domain,
        queries=queries,
        anonymization_map=anon_map,
        root=root,
    )


def validate_corpus(corpus: Corpus) -> list[ValidationIssue]:
    """Check every structural invariant; issues are data, not failures."""
    issues: list[ValidationIssue] = []

    all_units: list[SourceUnit] = []
    for pair in corpus.pairs:
        all_units.extend((pair.source, pair.target))
    all_units.extend(corpus.domain_model.files)
    all_units.extend(corpus.queries)

    seen: set[str] = set()
    for unit in all_units:
        if not unit.id:
            issues.append(ValidationIssue(unit.id, "empty-id"))
        elif unit.id in seen:
            issues.append(ValidationIssue(unit.id, "duplicate-id"))
        seen.add(unit.id)

    for pair in corpus.pairs:
        if pair.source.language != LANG_PLSQL or pair.target.language != LANG_JAVA:
            issues.append(
                ValidationIssue(pair.pair_id, "language-mismatch",
                                f"{pair.source.language}->{pair.target.language}")
            )

    for unit in corpus.domain_model.files:
        if unit.language != LANG_JAVA:
            issues.append(ValidationIssue(unit.id, "language-mismatch", unit.language))
    domain_ids = [u.id for u in corpus.domain_model.files]
    if domain_ids != sorted(domain_ids):
        issues.append(ValidationIssue("domain", "domain-order", "not sorted by id"))

    for unit in corpus.queries:
        if unit.language != LANG_PLSQL:
            issues.append(ValidationIssue(unit.id, "language-mismatch", unit.language))

    return issues


def _replace_whole_tokens(text: str, old: str, new: str, language: str) -> str:
    chars = _BOUNDARY_CHARS[language]
    pattern = rf"(?<![{chars}]){re.escape(old)}(?![{chars}])"
    return re.sub(pattern, lambda _match: new, text)


def apply_anonymization(unit: SourceUnit, mapping: AnonymizationMap) -> SourceUnit:
    """Rewrite each original identifier to its alias, whole tokens only.

    Replacements run in entry order and are case-sensitive; token boundaries
    follow the unit language's identifier alphabet, so substrings inside
    longer identifiers are never touched.
    """
    text = unit.text
    for original, alias in mapping.entries:
        text = _replace_whole_tokens(text, original, alias, unit.language)
    if text == unit.text:
        return unit
    return SourceUnit(id=unit.id, language=unit.language, path=unit.path, text=text)


def reverse_anonymization(unit: SourceUnit, mapping: AnonymizationMap) -> SourceUnit:
    """Inverse rewrite (alias -> original) with the same boundary rule."""
    return apply_anonymization(unit, mapping.inverse())
