"""Next-step query recommendation: relevance mining, contextual scoring, ranking.

The pipeline: retrieve reference queries from semantically relevant domains,
binarize each catalog column's similarity to the reference occurrences, mine
maximal frequent column combinations, assemble candidate SELECT/GROUP BY
queries with suggested aggregations, and rank them — by reference frequency
for the first step, and by the recency-decayed contextual similarity to the
session history afterwards.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .embedding import Embedder, default_embedder
from .errors import EmptyHistory, NoJoinPath
from .ir import (
    AGGREGATE_ORDER,
    ActionKind,
    AggregateFn,
    QueryIR,
    SelectItem,
    action_columns,
    render_nl,
    synthesize_sql,
)
from .itemsets import mine_frequent_attribute_sets
from .reference import ReferenceRepository, reference_queries, retrieve_relevant_domains
from .relevance import (
    RelevanceVector,
    column_relevance_vector,
    max_similarity,
    occurrence_text,
)
from .schema import ColumnRef, SchemaCatalog, display_text_for, join_path

# candidate pool caps keep per-step latency bounded
MAX_SINGLE_CANDIDATES = 200
MAX_ITEMSET_CANDIDATES = 100
MAX_PAIRWISE_CANDIDATES = 200

FALLBACK_FLAG = "similarity_fallback"
EXHAUSTED_FLAG = "exhausted"


@dataclass(frozen=True)
class RecommenderConfig:
    alpha: float = 0.8
    beta: float = 0.5
    binarization_threshold: float = 0.5
    min_support: float = 0.1
    top_k: int = 5
    reference_domain_k: int = 5

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must be in [0, 1]")
        if not 0.0 < self.min_support <= 1.0:
            raise ValueError("min_support must be in (0, 1]")
        if self.top_k <= 0 or self.reference_domain_k <= 0:
            raise ValueError("top_k and reference_domain_k must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "RecommenderConfig":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})

    @classmethod
    def from_json(cls, path) -> "RecommenderConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class ExplorationContext:
    """Everything a recommendation step needs besides the session history."""

    catalog: SchemaCatalog
    repository: ReferenceRepository
    embedder: Embedder = field(default_factory=default_embedder, compare=False)


@dataclass(frozen=True)
class Recommendation:
    query: QueryIR
    nl_text: str
    score: float
    action_breakdown: dict[ActionKind, float] = field(compare=False, default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "sql": synthesize_sql(self.query),
            "nl": self.nl_text,
            "score": self.score,
            "action_breakdown": {k.value: v for k, v in self.action_breakdown.items()},
            "query": self.query.to_dict(),
        }


@dataclass(frozen=True)
class RecommendationSet:
    items: tuple[Recommendation, ...]
    flags: frozenset[str] = frozenset()

    def to_dict(self) -> dict:
        return {"items": [r.to_dict() for r in self.items], "flags": sorted(self.flags)}


# -- scoring ------------------------------------------------------------------

def action_similarity(
    a: QueryIR,
    b: QueryIR,
    action: ActionKind,
    embedder: Embedder | None = None,
) -> float:
    """Similarity of the columns two queries devote to one exploration action.

    Mean over the first query's action columns of their best match in the
    second query's, clamped to [0, 1]; 1 when both sides are empty, 0 when
    exactly one is.
    """
    emb = embedder or default_embedder()
    cols_a = action_columns(a, action)
    cols_b = action_columns(b, action)
    if not cols_a and not cols_b:
        return 1.0
    if not cols_a or not cols_b:
        return 0.0
    total = 0.0
    for x in cols_a:
        text_x = display_text_for(x.column)
        total += max(emb.similarity(text_x, display_text_for(y.column)) for y in cols_b)
    value = total / len(cols_a)
    return min(1.0, max(0.0, value))


def relevance(
    q_i: QueryIR,
    refs: Sequence[QueryIR],
    candidate: QueryIR,
    action: ActionKind,
    beta: float,
    embedder: Embedder | None = None,
) -> float:
    """Blend of a prior query's similarity to the candidate and to the reference pool.

    The reference side takes the max over reference queries so large domains
    cannot dominate through volume.
    """
    direct = action_similarity(q_i, candidate, action, embedder)
    if not refs:
        return direct
    best_ref = max(action_similarity(q_i, r, action, embedder) for r in refs)
    return direct + beta * best_ref


def contextual_score(
    history: Sequence[QueryIR],
    refs: Sequence[QueryIR],
    candidate: QueryIR,
    action: ActionKind,
    config: RecommenderConfig,
    embedder: Embedder | None = None,
) -> float:
    """Recency-decayed sum of per-history-query relevance; history is newest first."""
    if not history:
        raise EmptyHistory("contextual score needs at least one prior query")
    total = 0.0
    weight = 1.0
    for q in history:
        total += weight * relevance(q, refs, candidate, action, config.beta, embedder)
        weight *= config.alpha
    return total


# -- aggregation suggestion -----------------------------------------------------

def suggest_aggregations(
    column: ColumnRef,
    refs: Sequence[QueryIR],
    threshold: float,
    catalog: SchemaCatalog,
    embedder: Embedder | None = None,
) -> list[AggregateFn]:
    """Aggregates ranked by how often references apply them to similar columns.

    Ties follow the fixed order MIN < MAX < COUNT < SUM < AVG.  With no similar
    aggregated occurrence at all, numeric columns fall back to [SUM, AVG, COUNT]
    and non-numeric ones to [COUNT].
    """
    emb = embedder or default_embedder()
    target_text = catalog.display_text(column)
    counts: Counter = Counter()
    for ir in refs:
        for item in ir.selections:
            if item.aggregate is None:
                continue
            if emb.similarity(target_text, occurrence_text(item.column)) >= threshold:
                counts[item.aggregate] += 1
    if counts:
        return sorted(counts, key=lambda fn: (-counts[fn], AGGREGATE_ORDER.index(fn)))
    if catalog.value_kind(column) == "numeric":
        return [AggregateFn.SUM, AggregateFn.AVG, AggregateFn.COUNT]
    return [AggregateFn.COUNT]


# -- query assembly -------------------------------------------------------------

def assemble_query(
    selections: Sequence[tuple[ColumnRef, AggregateFn | None]],
    grouping: Sequence[ColumnRef],
    catalog: SchemaCatalog,
) -> QueryIR:
    """Build a full IR from chosen columns, connecting tables over FK paths.

    Tables are connected greedily in lexicographic order, each via the
    shortest FK path to the already-connected set; edges are oriented so each
    one extends the join chain.
    """
    needed = sorted({ref.table for ref, _ in selections} | {g.table for g in grouping})
    if not needed:
        raise NoJoinPath("no columns to assemble")

    connected = {needed[0]}
    edges: list[tuple[ColumnRef, ColumnRef]] = []
    edge_keys: set[frozenset] = set()
    for table in needed[1:]:
        if table in connected:
            continue
        best = None
        for anchor in sorted(connected):
            try:
                path = join_path(catalog, anchor, table)
            except NoJoinPath:
                continue
            key = (len(path), anchor)
            if best is None or key < best[0]:
                best = (key, anchor, path)
        if best is None:
            raise NoJoinPath(f"table {table!r} cannot be joined to {sorted(connected)}")
        _, anchor, path = best
        # orient each traversal step away from the already-connected side
        position = anchor
        for a, b in path:
            near, far = (a, b) if a.table == position else (b, a)
            pair = frozenset((near, far))
            if pair not in edge_keys:
                edges.append((near, far))
                edge_keys.add(pair)
            connected.add(far.table)
            connected.add(near.table)
            position = far.table

    ir = QueryIR(
        selections=tuple(SelectItem(ref, fn) for ref, fn in selections),
        grouping=tuple(grouping),
        source_tables=frozenset(connected),
        join_edges=tuple(edges),
    )
    from .ir import validate_ir

    validate_ir(ir)
    return ir


# -- candidate construction ------------------------------------------------------

def _grouping_attachment(
    context: ExplorationContext,
    refs: Sequence[QueryIR],
    config: RecommenderConfig,
) -> ColumnRef | None:
    """Top grouping-relevant categorical column, or None when nothing clears
    the binarization threshold."""
    best = None
    for col in context.catalog.all_columns():
        if context.catalog.value_kind(col) == "numeric":
            continue
        vector = column_relevance_vector(
            col, context.catalog, refs, ActionKind.GROUPING,
            config.binarization_threshold, context.embedder,
        )
        if vector.frequency == 0:
            continue
        key = (-vector.frequency, context.catalog.display_text(col), col)
        if best is None or key < best[0]:
            best = (key, col)
    return best[1] if best else None


def _build_candidate(
    columns: Sequence[ColumnRef],
    context: ExplorationContext,
    refs: Sequence[QueryIR],
    config: RecommenderConfig,
    group_attachment: ColumnRef | None,
) -> QueryIR | None:
    """Assemble a candidate IR: plain columns first, aggregated numeric columns
    after, GROUP BY attached per the grouping rules.  None when the columns
    cannot be joined."""
    ordered = sorted(set(columns))
    plain = [c for c in ordered if context.catalog.value_kind(c) != "numeric"]
    numeric = [c for c in ordered if context.catalog.value_kind(c) == "numeric"]

    selections: list[tuple[ColumnRef, AggregateFn | None]] = [(c, None) for c in plain]
    for col in numeric:
        top = suggest_aggregations(col, refs, config.binarization_threshold, context.catalog, context.embedder)[0]
        selections.append((col, top))

    if numeric and plain:
        grouping: list[ColumnRef] = list(plain)
    elif numeric and not plain and group_attachment is not None:
        selections = [(group_attachment, None)] + selections
        grouping = [group_attachment]
    else:
        grouping = []

    try:
        return assemble_query(selections, grouping, context.catalog)
    except NoJoinPath:
        return None


def _selection_vectors(
    context: ExplorationContext,
    refs: Sequence[QueryIR],
    config: RecommenderConfig,
) -> dict[ColumnRef, RelevanceVector]:
    return {
        col: column_relevance_vector(
            col, context.catalog, refs, ActionKind.SELECTION,
            config.binarization_threshold, context.embedder,
        )
        for col in context.catalog.all_columns()
    }


def _rank(
    scored: list[tuple[float, QueryIR, dict[ActionKind, float]]],
    top_k: int,
    exclude: Sequence[QueryIR] = (),
) -> list[Recommendation]:
    excluded = list(exclude)
    seen: list[QueryIR] = []
    ranked = sorted(scored, key=lambda entry: (-entry[0], synthesize_sql(entry[1])))
    out: list[Recommendation] = []
    for score, ir, breakdown in ranked:
        if any(ir == h for h in excluded) or any(ir == s for s in seen):
            continue
        seen.append(ir)
        out.append(
            Recommendation(query=ir, nl_text=render_nl(ir), score=score, action_breakdown=breakdown)
        )
        if len(out) >= top_k:
            break
    return out


def _candidate_pool_columns(
    vectors: dict[ColumnRef, RelevanceVector],
    scores: dict[ColumnRef, float],
    config: RecommenderConfig,
    restrict_to: set[ColumnRef] | None = None,
) -> list[list[ColumnRef]]:
    """Single-column and mined multi-column candidates, capped."""
    columns = sorted(scores, key=lambda c: (-scores[c], c))
    if restrict_to is not None:
        columns = [c for c in columns if c in restrict_to]
    singles = [[c] for c in columns[:MAX_SINGLE_CANDIDATES]]

    mined = mine_frequent_attribute_sets(vectors.values(), config.min_support)
    multi = [sorted(s) for s in mined if len(s) > 1]
    if restrict_to is not None:
        multi = [cols for cols in multi if any(c in restrict_to for c in cols)]
    multi.sort(key=lambda cols: (-sum(scores.get(c, 0.0) for c in cols), cols))
    return singles + multi[:MAX_ITEMSET_CANDIDATES]


def _frequency_ranked(
    context: ExplorationContext,
    refs: Sequence[QueryIR],
    config: RecommenderConfig,
    flags: set[str],
) -> list[tuple[float, QueryIR, dict[ActionKind, float]]]:
    """Initial-style candidate pool scored by summed relevance frequency,
    falling back to raw max similarity when every frequency is zero."""
    vectors = _selection_vectors(context, refs, config)
    frequencies = {col: float(v.frequency) for col, v in vectors.items()}

    if all(f == 0.0 for f in frequencies.values()):
        flags.add(FALLBACK_FLAG)
        scores = {
            col: max_similarity(col, context.catalog, refs, ActionKind.SELECTION, context.embedder)
            for col in frequencies
        }
    else:
        scores = frequencies

    group_attachment = _grouping_attachment(context, refs, config)
    pool = _candidate_pool_columns(vectors, scores, config)

    # distinct column sets can assemble into the same IR; keep the best score
    best_by_ir: dict[QueryIR, float] = {}
    for cols in pool:
        ir = _build_candidate(cols, context, refs, config, group_attachment)
        if ir is None:
            continue
        score = sum(scores.get(c, 0.0) for c in set(cols))
        if score > best_by_ir.get(ir, -1.0):
            best_by_ir[ir] = score
    return [
        (score, ir, {ActionKind.SELECTION: score,
                     ActionKind.GROUPING: 0.0,
                     ActionKind.AGGREGATION: 0.0})
        for ir, score in best_by_ir.items()
    ]


# -- public entry points ----------------------------------------------------------

def recommend_initial(context: ExplorationContext, config: RecommenderConfig) -> RecommendationSet:
    """First-step suggestions, ranked by reference frequency."""
    ranked_domains = retrieve_relevant_domains(
        context.repository, context.catalog.domain_label,
        config.reference_domain_k, context.embedder,
    )
    refs = reference_queries([g for g, _ in ranked_domains])
    flags: set[str] = set()
    scored = _frequency_ranked(context, refs, config, flags)
    return RecommendationSet(items=tuple(_rank(scored, config.top_k)), flags=frozenset(flags))


def recommend_next(
    history: Sequence[QueryIR],
    context: ExplorationContext,
    config: RecommenderConfig,
) -> RecommendationSet:
    """Context-aware suggestions after one or more queries; history is newest first.

    Candidates are unexplored single columns, mined combinations touching at
    least one unexplored column, and unexplored columns paired with one
    already-explored column; each is scored by the summed contextual
    similarity over the three exploration actions.
    """
    if not history:
        return recommend_initial(context, config)

    ranked_domains = retrieve_relevant_domains(
        context.repository, context.catalog.domain_label,
        config.reference_domain_k, context.embedder,
    )
    refs = reference_queries([g for g, _ in ranked_domains])

    explored: set[ColumnRef] = set()
    for q in history:
        explored |= action_columns(q, ActionKind.SELECTION)
        explored |= action_columns(q, ActionKind.GROUPING)

    all_columns = set(context.catalog.all_columns())
    unexplored = all_columns - explored

    flags: set[str] = set()
    if not unexplored:
        flags.add(EXHAUSTED_FLAG)
        scored = _frequency_ranked(context, refs, config, flags)
        return RecommendationSet(
            items=tuple(_rank(scored, config.top_k, exclude=history)),
            flags=frozenset(flags),
        )

    vectors = _selection_vectors(context, refs, config)
    frequencies = {col: float(v.frequency) for col, v in vectors.items()}
    if all(f == 0.0 for f in frequencies.values()):
        flags.add(FALLBACK_FLAG)
        frequencies = {
            col: max_similarity(col, context.catalog, refs, ActionKind.SELECTION, context.embedder)
            for col in frequencies
        }

    group_attachment = _grouping_attachment(context, refs, config)

    pool = _candidate_pool_columns(vectors, frequencies, config, restrict_to=unexplored)
    fresh_singles = [cols[0] for cols in pool if len(cols) == 1]
    pairwise: list[list[ColumnRef]] = []
    for u in fresh_singles:
        for e in sorted(explored & all_columns):
            pairwise.append([u, e])
            if len(pairwise) >= MAX_PAIRWISE_CANDIDATES:
                break
        if len(pairwise) >= MAX_PAIRWISE_CANDIDATES:
            break
    pool = pool + pairwise

    scored = []
    seen_ir: set = set()
    for cols in pool:
        ir = _build_candidate(cols, context, refs, config, group_attachment)
        if ir is None or ir in seen_ir:
            continue
        seen_ir.add(ir)
        breakdown = {
            action: contextual_score(history, refs, ir, action, config, context.embedder)
            for action in ActionKind
        }
        scored.append((sum(breakdown.values()), ir, breakdown))

    items = _rank(scored, config.top_k, exclude=history)
    if not items:
        flags.add(EXHAUSTED_FLAG)
        fallback = _frequency_ranked(context, refs, config, flags)
        items = _rank(fallback, config.top_k, exclude=history)
    return RecommendationSet(items=tuple(items), flags=frozenset(flags))
