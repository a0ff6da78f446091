"""Exception hierarchy shared across the pipeline.

Every failure the CLI maps to an exit code derives from PipelineError.
Modules raise the most specific subclass; the CLI groups them into
config/corpus (2), backend (3), and evaluation (4) categories.
"""

from __future__ import annotations


class PipelineError(Exception):
    """Base class for all pipeline failures."""


# -- corpus / config ---------------------------------------------------------

class CorpusLayoutError(PipelineError):
    """Corpus directory or map file does not match the expected layout."""


class PairingError(PipelineError):
    """A source or target file has no counterpart sharing its stem."""

    def __init__(self, orphan_id: str, message: str | None = None):
        self.orphan_id = orphan_id
        super().__init__(message or f"unpaired exemplar file for stem {orphan_id!r}")


class UnknownQueryError(PipelineError):
    """A query id was requested that does not exist in the corpus."""


class ConfigError(PipelineError):
    """Pipeline configuration file is missing, malformed, or inconsistent."""


class LexError(PipelineError):
    """Tokenization failed; `offset` locates the problem in code units."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


class EnumerationCapError(PipelineError):
    """Subset enumeration would exceed the configured cap."""

    def __init__(self, theoretical_count: int, cap: int):
        self.theoretical_count = theoretical_count
        self.cap = cap
        super().__init__(
            f"enumeration would produce {theoretical_count} subsets, "
            f"exceeding the cap of {cap}"
        )


class TemplateError(PipelineError):
    """A prompt template is missing required placeholders."""


class BudgetExceededError(PipelineError):
    """Prompt cannot fit the token budget even with every exemplar evicted."""

    def __init__(self, overflow_tokens: int):
        self.overflow_tokens = overflow_tokens
        super().__init__(
            f"prompt exceeds the token budget by {overflow_tokens} tokens "
            "after removing all exemplars"
        )


# -- backend -----------------------------------------------------------------

class BackendError(PipelineError):
    """Base class for completion-backend failures."""


class AuthError(BackendError):
    """Authentication was rejected (HTTP 401/403) or no key is available."""


class TransportError(BackendError):
    """Retries exhausted or a non-retryable transport failure occurred."""

    def __init__(self, message: str, status: int | None = None):
        self.status = status
        super().__init__(message)


class MockMissError(BackendError):
    """The mock table has no entry for the query digest."""

    def __init__(self, digest: str):
        self.digest = digest
        super().__init__(f"mock table has no response for digest {digest}")


class EmptyResponseError(BackendError):
    """The backend returned no usable text."""


# -- evaluation / reporting --------------------------------------------------

class ReportParseError(PipelineError):
    """A test report file could not be parsed; message carries context."""


class RecordPairingError(PipelineError):
    """Outcome classification was given records for different files."""


class ChartConsistencyError(PipelineError):
    """Best-subset similarity fell below the all-samples score for a file."""


# -- orchestration -----------------------------------------------------------

class StageError(PipelineError):
    """Wraps a failure with the pipeline stage it occurred in."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")
