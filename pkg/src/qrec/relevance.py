"""Per-column relevance vectors against reference query occurrences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .embedding import Embedder, default_embedder
from .ir import ActionKind, QueryIR
from .schema import ColumnRef, SchemaCatalog, display_text_for


@dataclass(frozen=True)
class RelevanceVector:
    """Binary relevance of one catalog column to reference occurrences.

    ``bits[i]`` is 1 iff the column is semantically similar (threshold-binarized
    cosine) to the i-th reference occurrence; ``frequency`` counts the 1s.
    """

    column: ColumnRef
    bits: tuple[int, ...]

    @property
    def frequency(self) -> int:
        return sum(self.bits)


def action_occurrences(refs: Sequence[QueryIR], action: ActionKind) -> list[ColumnRef]:
    """Flattened column occurrences of the action-relevant clause of each query.

    SELECT columns carry the signal for selection and aggregation actions;
    GROUP BY columns carry it for grouping.
    """
    occurrences: list[ColumnRef] = []
    for ir in refs:
        if action is ActionKind.GROUPING:
            occurrences.extend(ir.grouping)
        else:
            occurrences.extend(item.column for item in ir.selections)
    return occurrences


def occurrence_text(ref: ColumnRef) -> str:
    """Readable text of a reference occurrence, derived from its identifier."""
    return display_text_for(ref.column)


def column_relevance_vector(
    column: ColumnRef,
    catalog: SchemaCatalog,
    refs: Sequence[QueryIR],
    action: ActionKind,
    threshold: float,
    embedder: Embedder | None = None,
) -> RelevanceVector:
    emb = embedder or default_embedder()
    target_text = catalog.display_text(column)
    bits = tuple(
        1 if emb.similarity(target_text, occurrence_text(occ)) >= threshold else 0
        for occ in action_occurrences(refs, action)
    )
    return RelevanceVector(column=column, bits=bits)


def max_similarity(
    column: ColumnRef,
    catalog: SchemaCatalog,
    refs: Sequence[QueryIR],
    action: ActionKind,
    embedder: Embedder | None = None,
) -> float:
    """Best raw similarity of a column to any occurrence; 0.0 when none exist.

    Fallback ranking signal when no column clears the binarization threshold.
    """
    emb = embedder or default_embedder()
    target_text = catalog.display_text(column)
    best = 0.0
    for occ in action_occurrences(refs, action):
        best = max(best, emb.similarity(target_text, occurrence_text(occ)))
    return best
