"""Structured representation of the supported SQL subset.

A :class:`QueryIR` captures exactly what the recommender reasons about:
selected columns, aggregate functions, grouping columns, and the FK join
chain connecting the source tables.  Everything else a source query may
contain (filters, ordering, limits) is dropped at parse time and flagged
``lossy``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidQueryIR
from .schema import ColumnRef, FkEdge, display_text_for


class AggregateFn(Enum):
    MIN = "MIN"
    MAX = "MAX"
    COUNT = "COUNT"
    SUM = "SUM"
    AVG = "AVG"


# Fixed tie-break order for aggregate ranking.
AGGREGATE_ORDER = (AggregateFn.MIN, AggregateFn.MAX, AggregateFn.COUNT, AggregateFn.SUM, AggregateFn.AVG)

_AGG_WORDS = {
    AggregateFn.MIN: "minimum",
    AggregateFn.MAX: "maximum",
    AggregateFn.COUNT: "number of",
    AggregateFn.SUM: "total",
    AggregateFn.AVG: "average",
}


class ActionKind(Enum):
    SELECTION = "selection"
    GROUPING = "grouping"
    AGGREGATION = "aggregation"


@dataclass(frozen=True)
class SelectItem:
    column: ColumnRef
    aggregate: AggregateFn | None = None


@dataclass(frozen=True)
class QueryIR:
    selections: tuple[SelectItem, ...]
    grouping: tuple[ColumnRef, ...] = ()
    source_tables: frozenset[str] = frozenset()
    join_edges: tuple[FkEdge, ...] = ()
    # Provenance marker only: does not participate in IR equality.
    lossy: bool = field(default=False, compare=False)

    def columns(self, action: ActionKind) -> set[ColumnRef]:
        return action_columns(self, action)

    def to_dict(self) -> dict:
        return {
            "selections": [
                {
                    "table": s.column.table,
                    "column": s.column.column,
                    "aggregate": s.aggregate.value if s.aggregate else None,
                }
                for s in self.selections
            ],
            "grouping": [[g.table, g.column] for g in self.grouping],
            "source_tables": sorted(self.source_tables),
            "join_edges": [[[a.table, a.column], [b.table, b.column]] for a, b in self.join_edges],
            "lossy": self.lossy,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QueryIR":
        selections = tuple(
            SelectItem(
                ColumnRef(s["table"], s["column"]),
                AggregateFn(s["aggregate"]) if s.get("aggregate") else None,
            )
            for s in data["selections"]
        )
        grouping = tuple(ColumnRef(t, c) for t, c in data["grouping"])
        edges = tuple(
            (ColumnRef(a[0], a[1]), ColumnRef(b[0], b[1])) for a, b in data["join_edges"]
        )
        return cls(
            selections=selections,
            grouping=grouping,
            source_tables=frozenset(data["source_tables"]),
            join_edges=edges,
            lossy=bool(data.get("lossy", False)),
        )


def validate_ir(ir: QueryIR) -> None:
    """Raise :class:`InvalidQueryIR` unless all structural invariants hold."""
    if not ir.selections:
        raise InvalidQueryIR("query selects nothing")
    for ref in [s.column for s in ir.selections] + list(ir.grouping):
        if ref.table not in ir.source_tables:
            raise InvalidQueryIR(f"{ref} is not drawn from the source tables")
    if ir.grouping:
        group_set = set(ir.grouping)
        for s in ir.selections:
            if s.aggregate is None and s.column not in group_set:
                raise InvalidQueryIR(f"plain selection {s.column} missing from GROUP BY")

    # join_edges must form a chain covering every source table: the first
    # edge starts at the FROM table and each edge attaches one new table.
    if ir.join_edges:
        seen = {ir.join_edges[0][0].table}
        for a, b in ir.join_edges:
            if a.table not in ir.source_tables or b.table not in ir.source_tables:
                raise InvalidQueryIR(f"join edge {a}={b} leaves the source tables")
            if a.table not in seen:
                raise InvalidQueryIR(f"join edge {a}={b} does not extend the join chain")
            seen.add(b.table)
        if seen != set(ir.source_tables):
            raise InvalidQueryIR("join chain does not cover every source table")
    elif len(ir.source_tables) > 1:
        raise InvalidQueryIR("multiple source tables but no join edges")
    elif len(ir.source_tables) == 0:
        raise InvalidQueryIR("no source tables")


def action_columns(ir: QueryIR, action: ActionKind) -> set[ColumnRef]:
    """Columns touched by one exploration action of the query."""
    if action is ActionKind.SELECTION:
        return {s.column for s in ir.selections}
    if action is ActionKind.GROUPING:
        return set(ir.grouping)
    return {s.column for s in ir.selections if s.aggregate is not None}


def synthesize_sql(ir: QueryIR) -> str:
    """Canonical SQL text for a valid IR.

    Column names are fully qualified, joins follow the stored edge chain, and
    grouping columns keep their stored order, so ``parse_sql`` reads the text
    back into an equal IR.
    """
    validate_ir(ir)

    def qualify(ref: ColumnRef) -> str:
        return f"{ref.table}.{ref.column}"

    select_parts = []
    for item in ir.selections:
        if item.aggregate is None:
            select_parts.append(qualify(item.column))
        else:
            select_parts.append(f"{item.aggregate.value}({qualify(item.column)})")

    if ir.join_edges:
        from_table = ir.join_edges[0][0].table
    else:
        from_table = next(iter(ir.source_tables))
    sql = f"SELECT {', '.join(select_parts)} FROM {from_table}"
    for a, b in ir.join_edges:
        sql += f" JOIN {b.table} ON {qualify(a)} = {qualify(b)}"
    if ir.grouping:
        sql += " GROUP BY " + ", ".join(qualify(g) for g in ir.grouping)
    return sql


def _pluralize_last_word(phrase: str) -> str:
    words = phrase.split(" ")
    if words and not words[-1].endswith("s"):
        words[-1] = words[-1] + "s"
    return " ".join(words)


def render_nl(ir: QueryIR) -> str:
    """Deterministic template rendering of a query as an English question.

    Readable column text is derived from identifiers (underscores become
    spaces); aggregates map to fixed wording; grouping becomes a trailing
    "for each" clause.
    """
    validate_ir(ir)
    phrases = []
    has_aggregate = False
    for item in ir.selections:
        text = display_text_for(item.column.column)
        if item.aggregate is not None:
            has_aggregate = True
            text = f"{_AGG_WORDS[item.aggregate]} {text}"
        phrases.append(text)

    verb = "is" if has_aggregate else "are"
    if verb == "are":
        phrases[-1] = _pluralize_last_word(phrases[-1])
    question = f"What {verb} the " + " and ".join(phrases)
    if ir.grouping:
        question += " for each " + " and ".join(display_text_for(g.column) for g in ir.grouping)
    return question + "?"
