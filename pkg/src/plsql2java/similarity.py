"""Cosine similarity over term-frequency vectors and exhaustive subset search.

Vectors are plain dicts mapping term -> positive count. The subset search
compares candidate subsets with exact integer arithmetic (cross-multiplied
squared cosines), so the argmax and its tie-break are immune to float
rounding; only the reported score is a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .errors import EnumerationCapError

TermVector = dict[str, int]


@dataclass(frozen=True)
class SubsetConstraints:
    """Bounds on exemplar-subset size; max_size None means all candidates."""

    min_size: int = 2
    max_size: int | None = None
    max_subsets: int | None = None

    def __post_init__(self) -> None:
        if self.min_size < 1:
            raise ValueError(f"min_size must be >= 1, got {self.min_size}")
        if self.max_size is not None and self.max_size < self.min_size:
            raise ValueError(
                f"max_size {self.max_size} < min_size {self.min_size}"
            )
        if self.max_subsets is not None and self.max_subsets < 1:
            raise ValueError("max_subsets must be >= 1 when set")


@dataclass(frozen=True)
class SelectionResult:
    """Winning subset, its recomputed score, and the search size."""

    chosen_ids: tuple[str, ...]
    score: float
    subsets_evaluated: int
    all_scores: tuple[tuple[tuple[str, ...], float], ...] | None = None


def cosine(a: TermVector, b: TermVector) -> float:
    """dot(a, b) / (||a|| * ||b||); 0.0 when either vector is empty."""
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(count * b[term] for term, count in a.items() if term in b)
    na2 = sum(c * c for c in a.values())
    nb2 = sum(c * c for c in b.values())
    if na2 == 0 or nb2 == 0:
        return 0.0
    return dot / (math.sqrt(na2) * math.sqrt(nb2))


def combine_vectors(vectors: Sequence[TermVector]) -> TermVector:
    """Per-term sum of counts; the combined-exemplar vector."""
    combined: dict[str, int] = {}
    for vec in vectors:
        for term, count in vec.items():
            combined[term] = combined.get(term, 0) + count
    return combined


def count_subsets(n: int, min_size: int, max_size: int) -> int:
    """Closed-form subset count: sum of C(n, k) for k in [min_size, max_size]."""
    return sum(math.comb(n, k) for k in range(min_size, max_size + 1))


def enumerate_subsets(
    candidate_ids: Sequence[str], constraints: SubsetConstraints
) -> Iterator[tuple[str, ...]]:
    """Yield every id-subset within the size bounds, deterministically.

    Order: size ascending, then lexicographic by the sorted id tuple.
    max_size above the candidate count is clamped to it; a min_size above
    the candidate count is an error. Raises EnumerationCapError up front
    when the theoretical count exceeds max_subsets.
    """
    ids = sorted(candidate_ids)
    if len(set(ids)) != len(ids):
        raise ValueError("candidate ids must be pairwise distinct")
    n = len(ids)
    if constraints.min_size > n:
        raise ValueError(
            f"min_size {constraints.min_size} exceeds candidate count {n}"
        )
    max_size = n if constraints.max_size is None else min(constraints.max_size, n)
    total = count_subsets(n, constraints.min_size, max_size)
    if constraints.max_subsets is not None and total > constraints.max_subsets:
        raise EnumerationCapError(total, constraints.max_subsets)
    for k in range(constraints.min_size, max_size + 1):
        yield from combinations(ids, k)


def _squared_cosine_key(combined: TermVector, query: TermVector) -> tuple[int, int]:
    """(dot^2, |combined|^2) as exact integers; query norm cancels in comparisons."""
    dot = sum(count * query[term] for term, count in combined.items() if term in query)
    norm2 = sum(c * c for c in combined.values())
    if norm2 == 0:
        return 0, 1
    return dot * dot, norm2


def select_best_subset(
    query: TermVector,
    candidates: Sequence[tuple[str, TermVector]],
    constraints: SubsetConstraints = SubsetConstraints(),
    keep_all_scores: bool = False,
) -> SelectionResult:
    """Exhaustively search exemplar subsets for the one most similar to the query.

    Ties resolve to the smaller subset, then the lexicographically smallest
    id list (both implied by keeping the first strict maximum in enumeration
    order). The returned score is cosine(combine(chosen), query) recomputed
    from scratch.
    """
    if not candidates:
        raise ValueError("candidates must be non-empty")
    vectors = {cid: vec for cid, vec in candidates}
    if len(vectors) != len(candidates):
        raise ValueError("candidate ids must be pairwise distinct")

    best_subset: tuple[str, ...] | None = None
    best_dot2 = 0
    best_norm2 = 1
    evaluated = 0
    all_scores: list[tuple[tuple[str, ...], float]] = []

    for subset in enumerate_subsets(list(vectors), constraints):
        combined = combine_vectors([vectors[cid] for cid in subset])
        dot2, norm2 = _squared_cosine_key(combined, query)
        evaluated += 1
        if keep_all_scores:
            all_scores.append((subset, cosine(combined, query)))
        # challenger wins iff dot2/norm2 strictly exceeds the incumbent
        if best_subset is None or dot2 * best_norm2 > best_dot2 * norm2:
            best_subset = subset
            best_dot2, best_norm2 = dot2, norm2

    assert best_subset is not None  # enumerate_subsets yields >= 1 subset
    final_score = cosine(
        combine_vectors([vectors[cid] for cid in best_subset]), query
    )
    return SelectionResult(
        chosen_ids=best_subset,
        score=final_score,
        subsets_evaluated=evaluated,
        all_scores=tuple(all_scores) if keep_all_scores else None,
    )


def scores_csv(result: SelectionResult) -> str:
    """Render all_scores as CSV: subset_ids, size, score at 9 decimals."""
    if result.all_scores is None:
        raise ValueError("selection was run without keep_all_scores")
    lines = ["subset_ids,size,score"]
    for subset, score in result.all_scores:
        lines.append(f"{'+'.join(subset)},{len(subset)},{score:.9f}")
    return "\n".join(lines) + "\n"
